"""Klein-Gordon bound states of an energy-dependent q-deformed Hulthen well in D dimensions."""
from .model import (CouplingLimit, PoleError, PotentialParams, QuantumNumbers,
                    centrifugal_gamma, greene_aldrich_centrifugal, scalar_potential,
                    vector_potential)
from .quantization import (AuxiliaryQuantities, DomainError, Validity, ValidityReport,
                           aux_at, quantization_residual, residual_derivative, validity)
from .solver import (ConvergenceError, RootFindConfig, Spectrum, SpectrumEntry,
                     newton_polish, root_census, scan_and_bracket, solve_cell, solve_spectrum)
from .thermo import Convention, ThermoSeries, thermo_series

__version__ = "0.1.0"
