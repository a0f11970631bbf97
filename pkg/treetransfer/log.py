#!/usr/bin/env python3

"""
Set the value of "verbose print" for the library and the command line.

Verbose lines go to stderr so that stdout only carries results.
"""
import inspect
import sys

_VPRINT = None


def print_with_log_prefix(*args, call_levels=1, **kwargs):
    """
    Print to stderr with a "[module.function]" prefix naming the caller.
    """
    # Get the name of the calling function.
    caller = inspect.stack()[call_levels]
    module = inspect.getmodule(caller[0])
    module_name = module.__name__ if module is not None else '?'
    caller_name = module_name + "." + caller[3]
    kwargs.setdefault('file', sys.stderr)
    print(f"[{caller_name}]", *args, **kwargs)


def set_verbose(verbose: bool):
    """
    Set the value of vprint based on passed verbosity (usually from CL).
    """
    global _VPRINT
    # We wrap vprint so that we can set the call level to 3 which avoids
    # printing the wrapper function name.
    if verbose:
        _VPRINT = lambda *a, **k: print_with_log_prefix(call_levels=3, *a, **k)
    else:
        _VPRINT = lambda *a, **k: None
    vprint(f"Verbosity set to {verbose}")


def vprint(*args, **kwargs):
    """
    vprint wrapper.
    """
    _VPRINT(*args, **kwargs)


# Not verbose by default.
set_verbose(False)
