# apps/experiments/forms.py
from django import forms

from apps.collocation.exceptions import InvalidArgument
from apps.oracles.exact import CaseId
from apps.solver.problems import Model, StartupScheme, TimeConfig
from apps.stability.spectra import MIN_NODES, FrozenPolicy, SweepModel


# ─────────────────────────────────────────────
# Field Groups
# ─────────────────────────────────────────────

RUN_PROBLEM_FIELDS    = ['model', 'case_id', 'sigma', 'reynolds', 'nu']
RUN_GRID_FIELDS       = ['m_nodes', 'mx', 'my']
RUN_TIME_FIELDS       = ['dt', 't_final', 'startup', 'sample_every']
RUN_OUTPUT_FIELDS     = ['output_dir', 'emit_pointwise']

ALL_RUN_FIELDS        = (RUN_PROBLEM_FIELDS + RUN_GRID_FIELDS +
                         RUN_TIME_FIELDS + RUN_OUTPUT_FIELDS)

SWEEP_FIELDS          = ['model', 'sizes', 'nu', 'reynolds', 'frozen', 'case_id', 'sigma',
                         'alpha', 'order', 'output_dir']

MODEL_CHOICES   = [(m.value, m.value) for m in Model]
CASE_CHOICES    = [(c.value, c.value) for c in CaseId]
STARTUP_CHOICES = [(s.value, s.value) for s in StartupScheme]
SWEEP_CHOICES   = [(m.value, m.value) for m in SweepModel]
# 'supplied' needs a callable, so it is a library-only policy.
FROZEN_CHOICES  = [(p.value, p.value) for p in FrozenPolicy if p is not FrozenPolicy.SUPPLIED]
SWEEP_CASE_CHOICES = [(c.value, c.value) for c in (CaseId.FOURIER_1D, CaseId.WOOD_1D)]

CASE_MODELS = {
    CaseId.WOOD_1D:    Model.BURGERS_1D,
    CaseId.FOURIER_1D: Model.BURGERS_1D,
    CaseId.ZERO_1D:    Model.BURGERS_1D,
    CaseId.SCALAR_2D:  Model.BURGERS_2D,
    CaseId.COUPLED:    Model.COUPLED,
}


def form_error_message(form):
    """Flatten form errors into one line: 'field: message; field: message'."""
    parts = []
    for field, messages in form.errors.items():
        label = 'config' if field == '__all__' else field
        parts.append(f"{label}: {' '.join(messages)}")
    return '; '.join(parts)


def validate(form):
    """Return cleaned data or raise InvalidArgument carrying every form error."""
    if not form.is_valid():
        raise InvalidArgument(form_error_message(form))
    return form.cleaned_data


class _PositiveFloatMixin:
    """clean_<name> helpers shared by both forms."""

    def _positive(self, name):
        value = self.cleaned_data.get(name)
        if value is not None and value <= 0:
            raise forms.ValidationError(f"{name} must be > 0.")
        return value

    def clean_reynolds(self):
        return self._positive('reynolds')

    def clean_nu(self):
        return self._positive('nu')


# ─────────────────────────────────────────────
# Solve
# ─────────────────────────────────────────────

class RunConfigForm(_PositiveFloatMixin, forms.Form):
    """
    Validate one solve configuration.
    Exactly one of reynolds / nu; the case must belong to the model.
    """

    model          = forms.ChoiceField(choices=MODEL_CHOICES)
    case_id        = forms.ChoiceField(choices=CASE_CHOICES)
    sigma          = forms.FloatField(required=False)
    reynolds       = forms.FloatField(required=False)
    nu             = forms.FloatField(required=False)

    m_nodes        = forms.IntegerField(required=False, min_value=MIN_NODES)
    mx             = forms.IntegerField(required=False, min_value=MIN_NODES)
    my             = forms.IntegerField(required=False, min_value=MIN_NODES)

    dt             = forms.FloatField()
    t_final        = forms.FloatField()
    startup        = forms.ChoiceField(choices=STARTUP_CHOICES, required=False)
    sample_every   = forms.IntegerField(required=False, min_value=1)

    output_dir     = forms.CharField(required=False)
    emit_pointwise = forms.BooleanField(required=False)

    def clean_sigma(self):
        sigma = self.cleaned_data.get('sigma')
        if sigma is not None and sigma <= 1:
            raise forms.ValidationError("sigma must be > 1.")
        return sigma

    def clean_dt(self):
        return self._positive('dt')

    def clean_t_final(self):
        return self._positive('t_final')

    def clean(self):
        cleaned_data = super().clean()
        model        = cleaned_data.get('model')
        case_id      = cleaned_data.get('case_id')
        reynolds     = cleaned_data.get('reynolds')
        nu           = cleaned_data.get('nu')

        if (reynolds is None) == (nu is None) and 'reynolds' not in self.errors and 'nu' not in self.errors:
            self.add_error(None, 'exactly one of reynolds or nu must be supplied.')

        if model and case_id and CASE_MODELS[CaseId(case_id)].value != model:
            self.add_error('case_id', f"case {case_id} does not belong to model {model}.")

        if case_id == CaseId.WOOD_1D.value and cleaned_data.get('sigma') is None and 'sigma' not in self.errors:
            self.add_error('sigma', 'sigma is required for case 1d-wood.')

        if model == Model.BURGERS_1D.value:
            if cleaned_data.get('m_nodes') is None and 'm_nodes' not in self.errors:
                self.add_error('m_nodes', 'm_nodes is required for a 1D model.')
        elif model:
            has_square = cleaned_data.get('m_nodes') is not None
            has_pair = cleaned_data.get('mx') is not None and cleaned_data.get('my') is not None
            if not (has_square or has_pair) and not self.errors.keys() & {'m_nodes', 'mx', 'my'}:
                self.add_error('m_nodes', 'a 2D model needs m_nodes or both mx and my.')

        # N = t_final / dt must come out whole
        dt, t_final = cleaned_data.get('dt'), cleaned_data.get('t_final')
        if dt is not None and t_final is not None:
            try:
                TimeConfig(dt=dt, t_final=t_final)
            except InvalidArgument as exc:
                self.add_error('t_final', exc.message)

        if not cleaned_data.get('startup'):
            cleaned_data['startup'] = StartupScheme.IMPLICIT.value
        if cleaned_data.get('sample_every') is None:
            cleaned_data['sample_every'] = 1
        return cleaned_data


# ─────────────────────────────────────────────
# Stability sweep
# ─────────────────────────────────────────────

class StabilitySweepForm(_PositiveFloatMixin, forms.Form):
    """
    Validate a stability sweep.
    sizes is a comma-separated list such as "10,17,24,31".
    A 1D sweep frozen at the initial state uses the 1d-fourier parabola
    unless case_id is 1d-wood, which needs sigma > 1.
    """

    model      = forms.ChoiceField(choices=SWEEP_CHOICES)
    sizes      = forms.CharField(required=False)
    nu         = forms.FloatField(required=False)
    reynolds   = forms.FloatField(required=False)
    frozen     = forms.ChoiceField(choices=FROZEN_CHOICES, required=False)
    case_id    = forms.ChoiceField(choices=SWEEP_CASE_CHOICES, required=False)
    sigma      = forms.FloatField(required=False)
    alpha      = forms.FloatField(required=False)
    order      = forms.TypedChoiceField(choices=[(1, '1'), (2, '2')], coerce=int, required=False)
    output_dir = forms.CharField(required=False)

    def clean_sizes(self):
        raw = self.cleaned_data.get('sizes', '')
        tokens = [token.strip() for token in raw.split(',') if token.strip()]
        if not tokens:
            raise forms.ValidationError('the size list is empty.')
        try:
            sizes = [int(token) for token in tokens]
        except ValueError:
            raise forms.ValidationError(f"sizes must be integers, got {raw!r}.")
        small = [size for size in sizes if size < MIN_NODES]
        if small:
            raise forms.ValidationError(f"every size must be >= {MIN_NODES}, got {small}.")
        return sizes

    def clean(self):
        cleaned_data = super().clean()
        model        = cleaned_data.get('model')
        reynolds     = cleaned_data.get('reynolds')
        nu           = cleaned_data.get('nu')

        needs_viscosity = model in (SweepModel.BURGERS_1D.value, SweepModel.COUPLED.value)
        if needs_viscosity and (reynolds is None) == (nu is None):
            if not self.errors.keys() & {'reynolds', 'nu'}:
                self.add_error(None, f"exactly one of reynolds or nu must be supplied for {model}.")

        if not cleaned_data.get('frozen'):
            cleaned_data['frozen'] = FrozenPolicy.INITIAL.value
        if not cleaned_data.get('case_id'):
            cleaned_data['case_id'] = CaseId.FOURIER_1D.value

        sigma = cleaned_data.get('sigma')
        wood_initial = (model == SweepModel.BURGERS_1D.value
                        and cleaned_data['frozen'] == FrozenPolicy.INITIAL.value
                        and cleaned_data['case_id'] == CaseId.WOOD_1D.value)
        if wood_initial and (sigma is None or sigma <= 1) and 'sigma' not in self.errors:
            self.add_error('sigma', 'sigma > 1 is required to freeze at 1d-wood data.')

        if cleaned_data.get('alpha') is None:
            cleaned_data['alpha'] = 1.0
        if not cleaned_data.get('order'):
            cleaned_data['order'] = 1
        return cleaned_data

    def sweep_parameter(self):
        """nu for burgers1d, Re for coupled; the weighting blocks ignore it."""
        data = self.cleaned_data
        model = data['model']
        if model == SweepModel.BURGERS_1D.value:
            return data['nu'] if data.get('nu') is not None else 1.0 / data['reynolds']
        if model == SweepModel.COUPLED.value:
            return data['reynolds'] if data.get('reynolds') is not None else 1.0 / data['nu']
        return 0.0
