"""Turn a dataclass config into command-line overrides."""

import argparse
import dataclasses


def parse_config(cls, description=None):
    parser = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            parser.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        elif isinstance(default, (tuple, list)):
            parser.add_argument(flag, type=str, default=",".join(map(str, default)), help="comma separated")
        else:
            parser.add_argument(flag, type=type(default), default=default)
    ns = vars(parser.parse_args())
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        if isinstance(default, (tuple, list)) and isinstance(ns[f.name], str):
            ns[f.name] = tuple(type(default[0])(v) for v in ns[f.name].split(",") if v)
    return cls(**ns)
