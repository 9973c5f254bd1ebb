# simulations/forms.py

import numpy as np
from django import forms
from django.core.exceptions import ValidationError

MIN_SAMPLES = 1000


class FloatListField(forms.Field):
    """
    Comma-separated numbers, or ``start:stop:count`` for ``count`` evenly
    spaced values from start to stop inclusive.

    Lists must be non-empty and strictly increasing unless
    ``monotone=False``.
    """

    def __init__(self, *, min_value=None, max_value=None, monotone=True, **kwargs):
        self.min_value = min_value
        self.max_value = max_value
        self.monotone = monotone
        super().__init__(**kwargs)

    def to_python(self, value):
        if value in self.empty_values:
            return None
        text = str(value).strip()
        try:
            if ":" in text:
                start, stop, count = (part.strip() for part in text.split(":"))
                count = int(count)
                if count < 1:
                    raise ValidationError("range count must be >= 1")
                return [float(v) for v in np.linspace(float(start), float(stop), count)]
            return [float(part) for part in text.split(",") if part.strip()]
        except ValueError as exc:
            raise ValidationError(f"expected numbers separated by commas or start:stop:count, got {text!r}") from exc

    def validate(self, value):
        super().validate(value)
        if value is None:
            return
        if not value:
            raise ValidationError("list must not be empty")
        values = np.asarray(value)
        if not np.all(np.isfinite(values)):
            raise ValidationError("list values must be finite")
        if self.monotone and np.any(np.diff(values) <= 0):
            raise ValidationError("list must be strictly increasing")
        if self.min_value is not None and values.min() < self.min_value:
            raise ValidationError(f"values must be >= {self.min_value}")
        if self.max_value is not None and values.max() > self.max_value:
            raise ValidationError(f"values must be <= {self.max_value}")


class RunForm(forms.Form):
    """``[run]``: sampling controls shared by every command."""

    samples = forms.IntegerField(required=False, min_value=MIN_SAMPLES)
    seed = forms.IntegerField(required=False, min_value=0)
    double_clicks = forms.NullBooleanField(required=False)


class SourceForm(forms.Form):
    """``[source]``: PDC with a squeezing grid, or the Bell state."""

    kind = forms.ChoiceField(choices=(("pdc", "PDC"), ("bell", "Bell state")))
    xi = FloatListField(required=False, min_value=0.0)

    def clean(self):
        cleaned_data = super().clean()
        kind = cleaned_data.get("kind")
        xi = cleaned_data.get("xi")

        if kind == "pdc" and not xi:
            raise ValidationError("kind=pdc requires a xi grid")
        if kind == "bell" and xi:
            self.add_error("xi", "'xi' does not apply to kind=bell")

        return cleaned_data


class DetectorForm(forms.Form):
    """``[detector]``"""

    eta_c = forms.FloatField(min_value=0.0, max_value=1.0)
    nu = forms.FloatField(required=False, min_value=0.0)

    def clean_eta_c(self):
        eta_c = self.cleaned_data["eta_c"]
        if eta_c <= 0:
            raise ValidationError("'eta_c' must be positive")
        return eta_c


class ScenarioForm(forms.Form):
    """
    ``[scenario]``

    Copropagation takes ``model``. Counterpropagation takes ``model_a``
    and ``model_b``, or ``model`` for both arms.
    """

    kind = forms.ChoiceField(choices=(
        ("copropagation", "Copropagation"),
        ("counterpropagation", "Counterpropagation"),
    ))
    model = forms.CharField(required=False)
    model_a = forms.CharField(required=False)
    model_b = forms.CharField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        kind = cleaned_data.get("kind")
        model = cleaned_data.get("model")
        per_arm = [cleaned_data.get("model_a"), cleaned_data.get("model_b")]

        if kind == "copropagation":
            if any(per_arm):
                raise ValidationError("copropagation takes 'model', not model_a/model_b")
            if not model:
                raise ValidationError("copropagation requires 'model'")

        if kind == "counterpropagation":
            if model and any(per_arm):
                raise ValidationError("give either 'model' or model_a/model_b, not both")
            if not model and not all(per_arm):
                raise ValidationError("counterpropagation requires model_a and model_b")

        return cleaned_data


class PostselectionForm(forms.Form):
    """``[postselection]``"""

    eta_ps = FloatListField(min_value=0.0)

    def clean_eta_ps(self):
        grid = self.cleaned_data["eta_ps"]
        if grid[-1] >= 1:
            raise ValidationError("'eta_ps' values must be below 1")
        return grid


class StatsForm(forms.Form):
    """``[stats]``"""

    model = forms.CharField()
    thresholds = FloatListField(required=False, min_value=0.0, max_value=1.0)


class ValidateForm(forms.Form):
    """
    ``[validate]``: oracle grid. ``eta_a`` and ``eta_b`` are paired
    element by element.
    """

    xi = FloatListField(required=False, min_value=0.0)
    eta_c = FloatListField(required=False, min_value=0.0, max_value=1.0)
    nu = FloatListField(required=False, min_value=0.0)
    eta_a = FloatListField(required=False, min_value=0.0, max_value=1.0, monotone=False)
    eta_b = FloatListField(required=False, min_value=0.0, max_value=1.0, monotone=False)
    delta_theta = FloatListField(required=False)
    tolerance = forms.FloatField(required=False)
    n_max = forms.IntegerField(required=False, min_value=1)
    closed_form_eta_c_shift = forms.FloatField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        eta_a = cleaned_data.get("eta_a")
        eta_b = cleaned_data.get("eta_b")

        if (eta_a is None) != (eta_b is None):
            raise ValidationError("eta_a and eta_b must be given together")
        if eta_a is not None and len(eta_a) != len(eta_b):
            raise ValidationError("eta_a and eta_b must have the same length")

        eta_c = cleaned_data.get("eta_c")
        if eta_c is not None and min(eta_c) <= 0:
            self.add_error("eta_c", "'eta_c' values must be positive")

        tolerance = cleaned_data.get("tolerance")
        if tolerance is not None and tolerance <= 0:
            self.add_error("tolerance", "'tolerance' must be positive")

        return cleaned_data
