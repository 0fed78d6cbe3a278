from .configuration_manager import (ConfigurationManager, EmitOptions, LearnHyperparams, OptimizeOptions,
                                    OutputConfig)
from .logging_setup import configure_logging

__all__ = ['ConfigurationManager', 'LearnHyperparams', 'OptimizeOptions', 'EmitOptions', 'OutputConfig',
           'configure_logging']
