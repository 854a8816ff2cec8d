import django.core.serializers.json
import django_extensions.db.fields
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created', django_extensions.db.fields.CreationDateTimeField(auto_now_add=True, verbose_name='created')),
                ('modified', django_extensions.db.fields.ModificationDateTimeField(auto_now=True, verbose_name='modified')),
                ('kind', models.CharField(choices=[('SOLVE', 'Solve'), ('STABILITY', 'Stability Sweep'), ('REPRODUCE', 'Table Reproduction')], help_text='Which command produced this row', max_length=20)),
                ('status', models.CharField(choices=[('OK', 'Completed'), ('TOLERANCE_FAILURE', 'Tolerance Failure'), ('CONFIG_ERROR', 'Configuration Error'), ('NUMERICAL_FAILURE', 'Numerical Failure')], default='OK', help_text='How the invocation ended', max_length=20)),
                ('model', models.CharField(blank=True, help_text='burgers1d, burgers2d, coupled or a stability sweep model', max_length=20)),
                ('case_id', models.CharField(blank=True, help_text='Exact-solution case (solve only)', max_length=20)),
                ('table_id', models.PositiveSmallIntegerField(blank=True, help_text='Published table number (reproduce only)', null=True)),
                ('config', models.JSONField(blank=True, default=dict, encoder=django.core.serializers.json.DjangoJSONEncoder, help_text='Echo of the validated configuration')),
                ('l2', models.FloatField(blank=True, help_text='L2 error at the final time', null=True)),
                ('linf', models.FloatField(blank=True, help_text='Linf error at the final time', null=True)),
                ('wall_time', models.FloatField(blank=True, help_text='Wall-clock seconds', null=True)),
                ('output_dir', models.CharField(blank=True, help_text='Directory the artifacts were written to', max_length=500)),
                ('reason', models.CharField(blank=True, help_text='Machine-readable reason code when the run failed', max_length=40)),
                ('message', models.TextField(blank=True, help_text='Human-readable outcome')),
                ('metadata', models.JSONField(blank=True, default=dict, encoder=django.core.serializers.json.DjangoJSONEncoder, help_text='Command statistics (JSON format)')),
            ],
            options={
                'verbose_name': 'Simulation Run',
                'verbose_name_plural': 'Simulation Runs',
                'db_table': 'simulation_runs',
                'ordering': ['-created'],
                'get_latest_by': 'modified',
                'abstract': False,
                'indexes': [
                    models.Index(fields=['kind', 'created'], name='simrun_kind_created_idx'),
                    models.Index(fields=['status'], name='simrun_status_idx'),
                ],
            },
        ),
    ]
