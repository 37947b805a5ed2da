"""Walsh-Fourier analysis, heat semigroup and KKL-type inequality checks on the discrete cube."""

__version__ = "0.1.0"
