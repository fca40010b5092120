"""
SkinLock Commands

One function per command-line command. Each takes a RunConfig, writes its
files through a RunWriter and returns the written paths.
"""

from .hn import cmd_hn_occupations, cmd_hn_profiles, cmd_hn_source_scan
from .inverse import cmd_inverse_design
from .oracle import cmd_oracle_check
from .ssh import cmd_ssh_crossover, cmd_ssh_profiles
from .validate import cmd_validate

COMMANDS = {
    'hn-profiles': cmd_hn_profiles,
    'hn-source-scan': cmd_hn_source_scan,
    'hn-occupations': cmd_hn_occupations,
    'ssh-profiles': cmd_ssh_profiles,
    'ssh-crossover': cmd_ssh_crossover,
    'inverse-design': cmd_inverse_design,
    'validate': cmd_validate,
    'oracle-check': cmd_oracle_check,
}

__all__ = [
    'cmd_hn_profiles', 'cmd_hn_source_scan', 'cmd_hn_occupations', 'cmd_ssh_profiles',
    'cmd_ssh_crossover', 'cmd_inverse_design', 'cmd_validate', 'cmd_oracle_check', 'COMMANDS',
]
