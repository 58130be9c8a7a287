import json
import logging

from attr import attrs, attrib, asdict, evolve

from ..core import ElementManager
from ..exceptions import ConfigError, FrftError
from .generic import CharacteristicModel
from .gts import GtsParams, TemperedStableModel, gts_cf, gts_cumulants, gts_density_oracle, gts_psi
from .special import bessel_k, gamma_negative, log_gamma
from .vg import (VarianceGammaModel, VgParams, vg_cf, vg_cumulants, vg_density_closed,
                 vg_density_oracle, vg_peak_density)

logger = logging.getLogger(__name__)


available_models = [
  'vg',
  'gts',
]

_JSON_ALIASES = {
    'delta': 'delta_sym',
}


def model_factory(kind):
    if kind == 'vg':
        params_class = VgParams
        model_class = VarianceGammaModel
    elif kind == 'gts':
        params_class = GtsParams
        model_class = TemperedStableModel
    else:
        raise ConfigError('Model %s not implemented.' % kind)

    return {'params_class': params_class, 'model_class': model_class}


@attrs(frozen=True)
class ModelPreset(object):
    #: Registry key, e.g. 'vg-star'.
    identifier = attrib(type=str)
    #: Model kind, one of ``available_models``.
    kind = attrib(type=str)
    #: Parameter set of the model.
    params = attrib()
    #: One-line description for ``info models``.
    description = attrib(type=str, default='')

    def build(self):
        return model_factory(self.kind)['model_class'](self.params)


class ModelPresetManager(ElementManager):
    DEFAULT_ELEMENTS = [
        ModelPreset('vg', 'vg', VgParams(
            mu=0.08476896, delta_sym=-0.0577418, sigma=1.02948292, alpha=0.88450029, theta=0.93779517),
            'Variance-Gamma, heavy peak (density at mu about 0.855)'),
        ModelPreset('vg-star', 'vg', VgParams(
            mu=0.11998901, delta_sym=-0.0343164, sigma=0.10294829, alpha=2.54736083, theta=0.98780338),
            'Variance-Gamma, narrow (density at mu about 2.595)'),
        ModelPreset('gts', 'gts', GtsParams(
            mu=-0.693477, beta_plus=0.682290, beta_minus=0.242579, alpha_plus=0.458582,
            alpha_minus=0.414443, lambda_plus=0.822222, lambda_minus=0.727607),
            'Generalized tempered stable, wide'),
        ModelPreset('gts-star', 'gts', GtsParams(
            mu=-0.208043, beta_plus=0.682290, beta_minus=0.242579, alpha_plus=0.594234,
            alpha_minus=4.068436, lambda_plus=84.667097, lambda_minus=70.31591),
            'Generalized tempered stable, narrow'),
    ]

    def __init__(self):
        super().__init__(self.DEFAULT_ELEMENTS)


def model_from_dict(data, presets=None):
    """
    Build a model from a parameter mapping. ``data['model']`` names either a
    model kind, in which case every parameter must be given, or a preset whose
    parameters are overridden field by field. Kinds take precedence over
    presets of the same name.
    """
    data = dict(data)
    try:
        name = data.pop('model')
    except KeyError:
        raise ConfigError('Parameter set lacks a "model" entry')
    fields = {_JSON_ALIASES.get(key, key): value for key, value in data.items()}

    presets = presets if presets is not None else ModelPresetManager()
    try:
        if name in available_models:
            kind = name
            params = model_factory(kind)['params_class'](**fields)
        elif name in presets:
            preset = presets[name]
            kind = preset.kind
            params = evolve(preset.params, **fields)
        else:
            raise ConfigError('Unknown model kind or preset: %s' % name)
    except FrftError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError('Invalid parameters for model %s: %s' % (name, e))

    if fields:
        logger.debug('Model %s with parameters %s', name, asdict(params))
    return model_factory(kind)['model_class'](params)


def load_model(specifier, presets=None):
    """
    :param specifier: a preset name such as ``vg-star`` or the path of a JSON parameter file.
    """
    presets = presets if presets is not None else ModelPresetManager()
    if specifier in presets:
        return presets[specifier].build()

    try:
        with open(specifier) as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError('Unknown model preset and unreadable file: %s (%s)' % (specifier, e))
    except ValueError as e:
        raise ConfigError('Malformed JSON in %s: %s' % (specifier, e))

    if not isinstance(data, dict):
        raise ConfigError('Expected a JSON object in %s' % specifier)
    return model_from_dict(data, presets)
