from dataclasses import asdict, dataclass, fields
from typing import Tuple, Union

from motif_agm.errors import ParameterError, UndecodableFileError
from motif_agm.graph import MAX_CLIQUE_SIZE, MIN_CLIQUE_SIZE

INIT_METHODS = ('agm-pretrain', 'locally-minimal')
AUTO = 'auto'


@dataclass
class TrainConfig:
    """Every knob of a training run.  ``discriminating_samples`` and
    ``generating_samples`` are per-vertex sample counts for the D-step
    and G-step; they are unrelated to ``clique_size``.

    ``grad_clip`` and ``reward_floor`` are off at 0, leaving the
    adversarial steps as plain SGD on the raw log(1 - D) reward.
    """
    clique_size: int = 3
    communities: Union[int, str] = AUTO
    discriminating_samples: int = 5
    generating_samples: int = 5
    inner_updates: int = 3
    lr: float = 0.001
    max_iterations: int = 20
    convergence_window: int = 5
    convergence_tolerance: float = 1e-4
    seed: int = 0
    init: str = 'agm-pretrain'
    pretrain_epochs: int = 30
    pretrain_lr: float = 0.005
    pretrain_batch_size: int = 256
    max_walk: int = 10
    walk_restarts: int = 5
    grad_clip: float = 0.0
    reward_floor: float = 0.0
    pretrain_grad_clip: float = 10.0
    threads: int = 1
    community_candidates: Tuple[int, ...] = (2, 4, 8, 16)
    validation_pairs: int = 1000
    debug: bool = False

    def validate(self):
        if not MIN_CLIQUE_SIZE <= self.clique_size <= MAX_CLIQUE_SIZE:
            raise ParameterError("clique_size must be between %d and %d"
                                 % (MIN_CLIQUE_SIZE, MAX_CLIQUE_SIZE))
        if self.communities != AUTO and (
                not isinstance(self.communities, int) or
                self.communities < 1):
            raise ParameterError("communities must be a positive integer "
                                 "or 'auto'")
        for name in ('discriminating_samples', 'generating_samples',
                     'inner_updates', 'convergence_window',
                     'pretrain_batch_size', 'max_walk', 'threads',
                     'validation_pairs'):
            if getattr(self, name) < 1:
                raise ParameterError("%s must be positive" % name)
        for name in ('max_iterations', 'pretrain_epochs', 'walk_restarts'):
            if getattr(self, name) < 0:
                raise ParameterError("%s must not be negative" % name)
        if self.lr <= 0 or self.pretrain_lr <= 0:
            raise ParameterError("learning rates must be positive")
        if self.grad_clip < 0 or self.pretrain_grad_clip < 0:
            raise ParameterError("gradient clips must not be negative")
        if self.reward_floor > 0:
            raise ParameterError("reward_floor must not be positive")
        if self.init not in INIT_METHODS:
            raise ParameterError("init must be one of %s" %
                                 ", ".join(INIT_METHODS))
        if not self.community_candidates or \
                min(self.community_candidates) < 1:
            raise ParameterError("community_candidates must be positive")
        return self

    def with_communities(self, communities):
        values = asdict(self)
        values['communities'] = communities
        return TrainConfig(**values)

    def as_dict(self):
        values = asdict(self)
        values['community_candidates'] = list(self.community_candidates)
        return values

    @classmethod
    def resolve(cls, file_values=None, flag_values=None):
        """Merge config-file values and CLI flags over the defaults
        (flag > file > default).  Returns the validated config and the
        source of each field.
        """
        values = {}
        sources = {f.name: 'default' for f in fields(cls)}
        for origin, given in (('file', file_values), ('flag', flag_values)):
            for key, value in (given or {}).items():
                if value is None:
                    continue
                values[key] = value
                sources[key] = origin
        return cls(**values).validate(), sources


def _coerce(name, raw, default):
    raw = raw.strip()
    if name == 'communities':
        return AUTO if raw == AUTO else int(raw)
    if isinstance(default, bool):
        if raw.lower() in ('1', 'true', 'yes', 'on'):
            return True
        if raw.lower() in ('0', 'false', 'no', 'off'):
            return False
        raise ValueError(raw)
    if isinstance(default, tuple):
        return tuple(int(t) for t in raw.replace(',', ' ').split())
    return type(default)(raw)


def parse_config_value(name, raw):
    defaults = TrainConfig()
    if not hasattr(defaults, name):
        raise ParameterError("unknown config key %r" % name)
    try:
        return _coerce(name, raw, getattr(defaults, name))
    except ValueError:
        raise ParameterError("bad value %r for config key %r" % (raw, name))


def load_config_file(path):
    """Read flat ``key=value`` lines; '#' starts a comment."""
    try:
        with open(path, encoding='utf-8') as f:
            lines = f.readlines()
    except UnicodeDecodeError as e:
        raise UndecodableFileError(path, e)

    values = {}
    for line_number, line in enumerate(lines, 1):
        stripped = line.split('#', 1)[0].strip()
        if not stripped:
            continue
        if '=' not in stripped:
            raise ParameterError("%s:%d: expected key=value" %
                                 (path, line_number))
        key, raw = stripped.split('=', 1)
        key = key.strip().replace('-', '_')
        try:
            values[key] = parse_config_value(key, raw)
        except ParameterError as e:
            raise ParameterError("%s:%d: %s" % (path, line_number,
                                                e.message()))
    return values
