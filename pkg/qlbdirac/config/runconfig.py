"""
The run configuration: a flat ``key = value`` text file.

.. code::

    # Two packets on a line
    dims = 1
    extent = 1024
    model = njl
    coupling = 1.0
"""
import logging
import re
from dataclasses import dataclass, fields as dataclass_fields
from gettext import gettext as _

from ..algebra import AXES
from ..exceptions import InvalidParameter
from ..lattice import Boundary, Grid
from ..physics import ANTIPARTICLE, PARTICLE, WavepacketSpec
from ..potentials import CONFIG_POTENTIALS
from ..scheme import NJL, Electromagnetic, Free, StepPlan
from .exceptions import ConfigFileError
from .fields import (
    BooleanField, ChoiceField, ChoiceMapField, FloatField, IntegerField, ListField,
    StringField)
from .validator import Validator

logger = logging.getLogger(__name__)

KEY_RE = re.compile(r'^[a-z_][a-z0-9_]*$')

DEFAULT_AXES = {1: ('z',), 2: ('x', 'y'), 3: ('x', 'y', 'z')}

MODELS = ('free', 'em', 'njl')
POTENTIALS = tuple(CONFIG_POTENTIALS)


def parse_config_text(text, source=None):
    """
    Split configuration text into a dict of raw string values.

    ``#`` starts a comment. Blank lines are ignored. Malformed lines and
    repeated keys raise :exc:`~qlbdirac.config.exceptions.ConfigFileError`.
    """
    raw = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key = key.strip()
        if not sep:
            raise ConfigFileError(
                "Expected 'key = value', got {0!r}".format(line), line=number, source=source)
        if not KEY_RE.match(key):
            raise ConfigFileError(
                "Not a valid key: {0!r}".format(key), line=number, source=source)
        if key in raw:
            raise ConfigFileError(
                "Key {0!r} is set more than once".format(key), code='duplicate',
                line=number, source=source)
        raw[key] = value.strip()
    return raw


def read_config_file(path):
    with open(path, encoding='utf-8') as f:
        return parse_config_text(f.read(), source=str(path))


def _axis_field(**kwargs):
    return ChoiceField(AXES, **kwargs)


class RunConfigValidator(Validator):
    """
    Validates every key of a run configuration and derives the defaults
    that depend on other keys.
    """

    dims = IntegerField(min=1, max=3, default='1')
    extent = ListField(IntegerField(min=2), min_items=1, max_items=3, default='1024')
    axes = ListField(_axis_field(), min_items=1, max_items=3, default=None)
    boundary = ChoiceMapField({b.value: b for b in Boundary}, default='periodic')
    dt = FloatField(min=0, exclusive_min=True, default='1.0')
    steps = IntegerField(min=0, default='200')
    snapshot_cadence = IntegerField(min=1, default='10')
    snapshot_steps = ListField(IntegerField(min=0), default='')

    model = ChoiceField(MODELS, default='free')
    mass = FloatField(default='0.0')
    coupling = FloatField(default='0.0')
    charge = FloatField(default='0.0')

    potential = ChoiceField(POTENTIALS, default='none')
    potential_v = FloatField(default='0.0')
    potential_amplitude = FloatField(default='0.0')
    potential_wavenumber = FloatField(default='0.0')
    potential_omega = FloatField(default='0.0')
    potential_a = ListField(FloatField(), min_items=3, max_items=3, default='0, 0, 0')
    potential_polarization = _axis_field(default='x')
    potential_file = StringField(min_length=1, default=None)

    initial = ChoiceField(('gaussian', 'plane_wave', 'random'), default='gaussian')
    packet_k = FloatField(default='0.006')
    packet_sigma = FloatField(min=0, exclusive_min=True, default='48')
    packet_cu = FloatField(default='1.177')
    packet_cd = FloatField(default='0.784')
    packet_center = FloatField(default='0')
    packet_axis = _axis_field(default=None)
    plane_wave_modes = IntegerField(default='8')
    plane_wave_branch = ChoiceField((PARTICLE, ANTIPARTICLE), default=PARTICLE)
    normalize_ic = BooleanField(default='true')

    output_dir = StringField(min_length=1, default='output')
    seed = IntegerField(min=0, default='42')
    workers = IntegerField(min=1, default='1')
    axis_order = ListField(_axis_field(), min_items=1, max_items=3, default=None)
    velocity_window = ListField(IntegerField(min=0), min_items=2, max_items=2, default='10, 50')
    levels = IntegerField(min=3, default='4')
    converge_time = FloatField(min=0, exclusive_min=True, default='100')
    bench_repeats = IntegerField(min=1, default='3')

    default_error_messages = {
        'extent_count': _("Expected one extent or one per active axis ({dims})"),
        'axes_count': _("Expected {dims} distinct axes"),
        'axis_order': _("Must list each active axis ({axes}) exactly once"),
        'packet_axis': _("Must be one of the active axes ({axes})"),
        'potential_model': _("Potentials only apply to the em model"),
        'potential_file': _("Required when potential = file"),
        'window_order': _("The window must start before it ends"),
    }

    def _add(self, errors, name, code, **params):
        errors.add(name, self.error(code, params))

    def validate(self, data, errors):
        dims = data['dims']

        axes = data['axes'] or list(DEFAULT_AXES[dims])
        if len(axes) != dims or len(set(axes)) != dims:
            self._add(errors, 'axes', 'axes_count', dims=dims)
            return
        data['axes'] = axes

        extent = data['extent']
        if len(extent) == 1:
            data['extent'] = extent * dims
        elif len(extent) != dims:
            self._add(errors, 'extent', 'extent_count', dims=dims)

        active = ', '.join(axes)
        order = data['axis_order'] or sorted(axes)
        if sorted(order) != sorted(axes):
            self._add(errors, 'axis_order', 'axis_order', axes=active)
        data['axis_order'] = order

        packet_axis = data['packet_axis'] or axes[0]
        if packet_axis not in axes:
            self._add(errors, 'packet_axis', 'packet_axis', axes=active)
        data['packet_axis'] = packet_axis

        if data['potential'] != 'none' and data['model'] != 'em':
            self._add(errors, 'potential', 'potential_model')
        if data['potential'] == 'file' and data['potential_file'] is None:
            self._add(errors, 'potential_file', 'potential_file')

        start, stop = data['velocity_window']
        if not start < stop:
            self._add(errors, 'velocity_window', 'window_order')


@dataclass(frozen=True)
class RunConfig:
    """
    A fully resolved run configuration. Build one with :meth:`from_file`,
    :meth:`from_text` or :meth:`from_dict`.
    """
    dims: int
    extent: tuple
    axes: tuple
    boundary: Boundary
    dt: float
    steps: int
    snapshot_cadence: int
    snapshot_steps: tuple
    model: str
    mass: float
    coupling: float
    charge: float
    potential: str
    potential_v: float
    potential_amplitude: float
    potential_wavenumber: float
    potential_omega: float
    potential_a: tuple
    potential_polarization: str
    potential_file: str
    initial: str
    packet_k: float
    packet_sigma: float
    packet_cu: float
    packet_cd: float
    packet_center: float
    packet_axis: str
    plane_wave_modes: int
    plane_wave_branch: str
    normalize_ic: bool
    output_dir: str
    seed: int
    workers: int
    axis_order: tuple
    velocity_window: tuple
    levels: int
    converge_time: float
    bench_repeats: int

    def __post_init__(self):
        for f in dataclass_fields(self):
            value = getattr(self, f.name)
            if isinstance(value, list):
                object.__setattr__(self, f.name, tuple(value))

    @classmethod
    def from_dict(cls, raw, **overrides):
        """
        Validate a dict of raw text values. ``overrides`` replace or add
        raw values before validation.
        """
        raw = dict(raw, **overrides)
        cleaned = RunConfigValidator().clean(raw)
        return cls(**cleaned)

    @classmethod
    def from_text(cls, text, **overrides):
        return cls.from_dict(parse_config_text(text), **overrides)

    @classmethod
    def from_file(cls, path, **overrides):
        config = cls.from_dict(read_config_file(path), **overrides)
        logger.info("Loaded configuration from %s", path)
        return config

    def grid(self):
        return Grid.from_axes(self.extent, self.axes, self.boundary)

    def make_potential(self, grid=None):
        """
        The potential selected by ``potential``. Problems with a potential
        file raise :exc:`~qlbdirac.config.exceptions.ConfigFileError`.
        """
        cls = CONFIG_POTENTIALS[self.potential]
        try:
            return cls.from_config(self, grid or self.grid())
        except InvalidParameter as err:
            if not hasattr(err, 'path'):
                raise
            raise ConfigFileError(
                err.msg, code=err.code, line=err.line, source=err.path) from err

    def make_model(self, grid=None):
        if self.model == 'free':
            return Free(self.mass)
        if self.model == 'njl':
            return NJL(self.mass, self.coupling)
        return Electromagnetic(self.mass, self.charge, self.make_potential(grid))

    def packet(self):
        return WavepacketSpec(
            k=self.packet_k, sigma=self.packet_sigma, c_u=self.packet_cu, c_d=self.packet_cd,
            center=self.packet_center, axis=self.packet_axis)

    def plan(self):
        return StepPlan(self.axis_order)

    def resolved_items(self):
        """
        ``(key, text)`` pairs of every key in declaration order.
        """
        return RunConfigValidator().render_items(vars(self))


def validation_messages(errors):
    """
    One ``key: message`` line per error of an
    :exc:`~qlbdirac.config.exceptions.InvalidDataException`.
    """
    return ['{0}: {1}'.format('.'.join(str(p) for p in path), message)
            for path, message in errors.flatten()]

