"""
Probe Spectroscopy - Time-Grid Sampling
Parallel evaluation of <X_0(n tau)> on the symmetric grid n = -N..N
"""

import time
from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from lib.config import CHUNK_SIZE, DEFAULT_SEED, DEFAULT_SHOTS, MAX_WORKERS, PARALLEL_EXECUTION
from lib.engines import make_engine
from lib.spectro import TimeSeries


class Sampler:
    """
    Splits the time grid into chunks and evaluates them with one engine.
    """

    def __init__(self, engine, verbose=False, use_parallel=None, chunk_size=CHUNK_SIZE):
        """
        Initialize a sampler.

        Args:
            engine: Engine instance (see lib.engines)
            verbose: Print progress
            use_parallel: Override parallel execution setting
            chunk_size: Time samples per worker task
        """
        self.engine = engine
        self.verbose = verbose
        self.use_parallel = use_parallel if use_parallel is not None else PARALLEL_EXECUTION
        self.chunk_size = max(1, chunk_size)

    def sample(self, tau, n_max, mirror=False):
        """
        Evaluate the probe expectation on the grid.

        Args:
            tau: grid step (> 0)
            n_max: N (>= 1)
            mirror: evaluate n >= 0 only and copy to -n (even engines only)

        Returns:
            TimeSeries
        """
        if not tau > 0:
            raise ValueError(f"tau must be > 0, got {tau}")
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")

        use_mirror = mirror and self.engine.even
        if mirror and not use_mirror and self.verbose:
            print(f"[Warning] engine '{self.engine.name}' is not even in t; sampling the full grid")

        indices = np.arange(0 if use_mirror else -n_max, n_max + 1)
        start_time = time.time()
        values, stderr = self._run_chunks(indices, tau)

        if use_mirror:
            values = np.concatenate([values[:0:-1], values])
            if stderr is not None:
                stderr = np.concatenate([stderr[:0:-1], stderr])

        if self.verbose:
            elapsed = time.time() - start_time
            print(f"[Sampler] {len(indices)} samples with engine '{self.engine.name}' "
                  f"in {elapsed:.2f} seconds (mirror: {use_mirror})")

        return TimeSeries(tau, n_max, values, stderr)

    def _run_chunks(self, indices, tau):
        """Evaluate chunks in parallel and reassemble them in grid order"""
        chunks = [indices[i:i + self.chunk_size] for i in range(0, len(indices), self.chunk_size)]

        def chunk_task(idx):
            chunk = chunks[idx]
            return idx, self.engine.evaluate(chunk * tau, chunk)

        results = [None] * len(chunks)

        if self.use_parallel and len(chunks) > 1:
            # Parallel execution
            with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
                futures = [executor.submit(chunk_task, idx) for idx in range(len(chunks))]
                for future in as_completed(futures):
                    idx, result = future.result()
                    results[idx] = result
        else:
            # Sequential execution
            for idx in range(len(chunks)):
                _, results[idx] = chunk_task(idx)

        values = np.concatenate([r[0] for r in results])
        if results[0][1] is None:
            return values, None
        return values, np.concatenate([r[1] for r in results])


def sample_series(engine, total, tau, n_max, shots=DEFAULT_SHOTS, seed=DEFAULT_SEED,
                  mirror=False, verbose=False, use_parallel=None):
    """
    Sample <X_0(t)> on t_n = n tau, n = -N..N.

    Args:
        engine: engine name ("exact", "dense", "circuit", "shots") or Engine
        total: TotalModel
        tau: grid step
        n_max: N
        shots, seed: shot emulation settings
        mirror: compute n >= 0 only and mirror (valid for |+...+>)
        verbose: Print progress
        use_parallel: Override parallel execution setting

    Returns:
        TimeSeries
    """
    if isinstance(engine, str):
        engine = make_engine(engine, total, shots=shots, seed=seed)
    return Sampler(engine, verbose=verbose, use_parallel=use_parallel).sample(tau, n_max, mirror=mirror)
