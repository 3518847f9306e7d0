"""Synthetic extracellular spike waveforms with known source labels.

Random numbers come from a portable, fully specified generator so that
outputs can be reproduced bit-for-bit by other implementations:

* SplitMix64. The 64-bit state starts at ``seed mod 2**64``. Each draw adds
  ``0x9E3779B97F4A7C15`` to the state, then mixes ``z = state``::

      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
      z = (z ^ (z >> 27)) * 0x94D049BB133111EB
      out = z ^ (z >> 31)              (all arithmetic mod 2**64)

* Uniform in [0, 1): ``(out >> 11) * 2**-53``.
* Standard normal (Box-Muller, cosine branch only): two consecutive uniforms
  ``u1, u2`` give ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``.

``synthesize_spikes`` consumes the stream in this order:

1. Labels start as ``[0]*counts[0] + [1]*counts[1] + ...`` and are shuffled by
   Fisher-Yates: for ``i = N-1 .. 1``, ``j = out mod (i + 1)``, swap ``i, j``.
2. For each spike ``j = 0 .. N-1``: one normal ``g`` for the amplitude factor
   ``1 + amplitude_sd * g``, then ``L`` normals ``e`` (one per time sample)
   added as ``noise_sd * e``.
"""
import numpy as np

from .errors import ArgumentError

SPIKE_SAMPLES = 64

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & _MASK64

    def next_u64(self, count):
        """The next ``count`` outputs as a uint64 array."""
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * _GAMMA
            z = (z ^ (z >> np.uint64(30))) * _MIX1
            z = (z ^ (z >> np.uint64(27))) * _MIX2
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * int(_GAMMA)) & _MASK64
        return z

    def uniform(self, count):
        return (self.next_u64(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, count):
        u = self.uniform(2 * count)
        u1 = u[0::2]
        u2 = u[1::2]
        return np.sqrt(-2.0 * np.log(1.0 - u1)) * np.cos(2.0 * np.pi * u2)


def spike_times(samples=SPIKE_SAMPLES):
    """Sample times in milliseconds, centred on the spike peak."""
    return np.linspace(-0.5, 0.5, samples)


def default_templates():
    """Two distinct biphasic action-potential shapes (microvolts), 64 samples each."""
    t = spike_times()
    narrow = -90.0 * np.exp(-(((t + 0.02) / 0.05) ** 2)) + 30.0 * np.exp(-(((t - 0.12) / 0.08) ** 2))
    broad = -45.0 * np.exp(-(((t - 0.03) / 0.11) ** 2)) + 40.0 * np.exp(-(((t - 0.28) / 0.12) ** 2))
    return [narrow, broad]


def synthesize_spikes(templates, counts, noise_sd, seed, amplitude_sd=0.0):
    """Draw labelled spikes around the given templates.

    Returns ``(x, labels)`` where ``x`` is L x N (one spike per column) and
    ``labels[j]`` is the template index of column ``j``. Column ``j`` equals
    ``(1 + amplitude_sd*g_j) * templates[labels[j]] + noise_sd * e_j``.
    """
    templates = [np.asarray(tpl, dtype=np.float64) for tpl in templates]
    if not templates:
        raise ArgumentError("at least one template is required")
    length = templates[0].shape[0]
    if any(tpl.ndim != 1 or tpl.shape[0] != length for tpl in templates) or length < 1:
        raise ArgumentError("templates must be 1-D waveforms of equal, non-zero length")
    if any(not np.all(np.isfinite(tpl)) for tpl in templates):
        raise ArgumentError("templates must be finite")
    counts = [int(c) for c in counts]
    if len(counts) != len(templates):
        raise ArgumentError(f"{len(counts)} counts given for {len(templates)} templates")
    if any(c < 0 for c in counts):
        raise ArgumentError("counts must be non-negative")
    total = sum(counts)
    if total < 2:
        raise ArgumentError(f"need at least 2 spikes in total, got {total}")
    if not (noise_sd >= 0 and np.isfinite(noise_sd)):
        raise ArgumentError(f"noise_sd must be a finite value >= 0, got {noise_sd}")
    if not (amplitude_sd >= 0 and np.isfinite(amplitude_sd)):
        raise ArgumentError(f"amplitude_sd must be a finite value >= 0, got {amplitude_sd}")

    rng = SplitMix64(seed)
    labels = np.repeat(np.arange(len(templates)), counts)
    draws = rng.next_u64(total - 1)
    for step, i in enumerate(range(total - 1, 0, -1)):
        j = int(draws[step] % np.uint64(i + 1))
        labels[i], labels[j] = labels[j], labels[i]

    normals = rng.normal(total * (1 + length)).reshape(total, 1 + length)
    gains = 1.0 + amplitude_sd * normals[:, 0]
    shapes = np.stack(templates)[labels]
    x = gains[:, None] * shapes + noise_sd * normals[:, 1:]
    return x.T.copy(), labels
