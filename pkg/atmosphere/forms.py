# atmosphere/forms.py

from django import forms
from django.core.exceptions import ValidationError

MODEL_KINDS = (
    ("deterministic", "Deterministic"),
    ("lognormal", "Truncated log-normal"),
    ("elliptic", "Elliptic beam"),
    ("postselected", "Postselected"),
    ("empirical", "Empirical samples"),
)


class TransmittanceModelForm(forms.Form):
    """
    One ``[model.NAME]`` section.

    Handles:
    - Value ranges of every documented key
    - Which keys each ``kind`` requires, and which it forbids
    - The two alternative parametrizations of the lognormal and elliptic kinds
    """

    kind = forms.ChoiceField(choices=MODEL_KINDS)

    eta0 = forms.FloatField(required=False, min_value=0.0, max_value=1.0)

    # --- Truncated log-normal ---
    mu = forms.FloatField(required=False)
    sigma = forms.FloatField(required=False)
    mean = forms.FloatField(required=False)
    variance = forms.FloatField(required=False)

    eta_m = forms.FloatField(required=False, max_value=1.0)

    # --- Elliptic beam ---
    rytov_sq = forms.FloatField(required=False, min_value=0.0)
    fresnel = forms.FloatField(required=False)
    cn2 = forms.FloatField(required=False, min_value=0.0)
    wavelength = forms.FloatField(required=False)
    W0 = forms.FloatField(required=False)
    aperture = forms.FloatField(required=False)
    length = forms.FloatField(required=False)

    # --- Postselection / empirical ---
    eta_ps = forms.FloatField(required=False, min_value=0.0)
    inner = forms.CharField(required=False)
    path = forms.CharField(required=False)

    KIND_KEYS = {
        "deterministic": {"eta0"},
        "lognormal": {"mu", "sigma", "mean", "variance", "eta_m"},
        "elliptic": {"rytov_sq", "fresnel", "cn2", "wavelength", "W0",
                     "aperture", "length", "eta_m"},
        "postselected": {"eta_ps", "inner"},
        "empirical": {"path"},
    }

    POSITIVE_KEYS = ("sigma", "variance", "fresnel", "wavelength", "W0",
                     "aperture", "length", "eta_m")

    # -------------------------------------------------
    # Validation Layer
    # -------------------------------------------------

    def clean(self):
        cleaned_data = super().clean()
        kind = cleaned_data.get("kind")
        if not kind:
            return cleaned_data

        supplied = {
            key for key in self.fields
            if key != "kind" and cleaned_data.get(key) not in (None, "")
        }

        for key in sorted(supplied - self.KIND_KEYS[kind]):
            self.add_error(key, f"'{key}' does not apply to kind={kind}")

        for key in self.POSITIVE_KEYS:
            value = cleaned_data.get(key)
            if value is not None and value <= 0:
                self.add_error(key, f"'{key}' must be positive")

        mean = cleaned_data.get("mean")
        if mean is not None and not 0 < mean < 1:
            self.add_error("mean", "'mean' must lie in (0, 1)")

        eta_ps = cleaned_data.get("eta_ps")
        if eta_ps is not None and eta_ps >= 1:
            self.add_error("eta_ps", "'eta_ps' must be below 1")

        getattr(self, f"_clean_{kind}")(supplied)
        return cleaned_data

    def _require(self, supplied, keys):
        missing = [key for key in keys if key not in supplied]
        if missing:
            raise ValidationError(f"kind={self.cleaned_data['kind']} requires {', '.join(missing)}")

    def _clean_deterministic(self, supplied):
        self._require(supplied, ["eta0"])

    def _clean_lognormal(self, supplied):
        by_parameters = {"mu", "sigma"} & supplied
        by_moments = {"mean", "variance"} & supplied
        if by_parameters and by_moments:
            raise ValidationError("give either mu/sigma or mean/variance, not both")
        self._require(supplied, ["mean", "variance"] if by_moments else ["mu", "sigma"])

    def _clean_elliptic(self, supplied):
        by_parameters = {"rytov_sq", "fresnel"} & supplied
        by_physics = {"cn2", "wavelength"} & supplied
        if by_parameters and by_physics:
            raise ValidationError("give either rytov_sq/fresnel or cn2/wavelength, not both")
        first = ["cn2", "wavelength"] if by_physics else ["rytov_sq", "fresnel"]
        self._require(supplied, first + ["W0", "aperture", "length"])

    def _clean_postselected(self, supplied):
        self._require(supplied, ["eta_ps", "inner"])

    def _clean_empirical(self, supplied):
        self._require(supplied, ["path"])
