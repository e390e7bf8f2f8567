"""Non-binary LDPC codes over the binary erasure channel.

Thin wrapper over the C++ core: code sampling, encoding, set-based batch
and on-the-fly decoding, inefficiency measurement, and density-evolution
thresholds parameterized by the edge-label distribution.
"""

try:
    from . import _nbldpc as _impl  # installed wheel layout
except ImportError:  # in-tree builds put the extension on sys.path
    import _nbldpc as _impl

Code = _impl.Code
decode_bits = _impl.decode_bits
decode_stream = _impl.decode_stream
encode = _impl.encode
equivalence_check = _impl.equivalence_check
estimate_inefficiency = _impl.estimate_inefficiency
evolve = _impl.evolve
gamma_dist = _impl.gamma_dist
gf_mul = _impl.gf_mul
grassmannian_size = _impl.grassmannian_size
read_code = _impl.read_code
sample_code = _impl.sample_code
simulate = _impl.simulate
threshold = _impl.threshold
threshold_surface = _impl.threshold_surface
write_code = _impl.write_code
__version__ = _impl.__version__

__all__ = [
    "Code",
    "decode_bits",
    "decode_stream",
    "encode",
    "equivalence_check",
    "estimate_inefficiency",
    "evolve",
    "gamma_dist",
    "gf_mul",
    "grassmannian_size",
    "read_code",
    "sample_code",
    "simulate",
    "threshold",
    "threshold_surface",
    "write_code",
    "__version__",
]
