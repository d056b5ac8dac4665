import math
import threading

import httpx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from claimline.embedding.cache import CachingEmbedder, EmbeddingCache
from claimline.embedding.provider import (
    Embedder,
    EmbedderSpec,
    EmbeddingDimensionError,
    EmbeddingRateLimitError,
    EmbeddingTransportError,
    stub_vector,
)
from claimline.embedding.vectors import (
    DimensionMismatchError,
    EmbeddingVector,
    ZeroVectorError,
    cosine,
)


def vec(*values):
    return EmbeddingVector(np.array(values, dtype=np.float32))


class TestCosine:
    def test_self_similarity_is_one(self):
        v = vec(0.3, -1.2, 2.5)
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-6)

    def test_orthogonal_basis(self):
        assert cosine(vec(1, 0, 0), vec(0, 1, 0)) == 0.0

    def test_hand_computed_value(self):
        # 32 / (sqrt(14) * sqrt(77))
        expected = 32.0 / math.sqrt(14.0 * 77.0)
        assert cosine(vec(1, 2, 3), vec(4, 5, 6)) == pytest.approx(expected, abs=1e-9)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cosine(vec(1, 2), vec(1, 2, 3))

    def test_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            cosine(vec(0, 0), vec(1, 1))

    @given(st.lists(st.floats(-100, 100), min_size=2, max_size=16),
           st.integers(0, 2 ** 32))
    @settings(max_examples=200, deadline=None)
    def test_symmetry_exact(self, values, seed):
        a32 = np.array(values, dtype=np.float32)
        if float(np.linalg.norm(a32)) == 0.0:
            a32[0] = 1.0
        rng = np.random.default_rng(seed)
        b32 = rng.standard_normal(len(values)).astype(np.float32)
        a = EmbeddingVector(a32)
        b = EmbeddingVector(b32)
        assert cosine(a, b) == cosine(b, a)

    @given(st.floats(0.001, 1000.0), st.integers(0, 2 ** 32))
    @settings(max_examples=200, deadline=None)
    def test_scale_invariance(self, k, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal(12).astype(np.float32)
        b = rng.standard_normal(12).astype(np.float32)
        base = cosine(EmbeddingVector(a), EmbeddingVector(b))
        scaled = cosine(EmbeddingVector((a * np.float32(k))), EmbeddingVector(b))
        assert scaled == pytest.approx(base, abs=1e-6)

    def test_normalized_inputs_equal_dot(self):
        a = EmbeddingVector(stub_vector("x", 16), normalized=True)
        b = EmbeddingVector(stub_vector("y", 16), normalized=True)
        dot = float(np.dot(a.values.astype(np.float64), b.values.astype(np.float64)))
        assert cosine(a, b) == pytest.approx(dot, abs=1e-6)


class TestVectorInvariants:
    def test_normalized_flag_checked(self):
        with pytest.raises(ValueError):
            EmbeddingVector(np.array([1.0, 1.0], dtype=np.float32), normalized=True)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            EmbeddingVector(np.array([1.0, np.inf], dtype=np.float32))

    def test_unit_of_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            EmbeddingVector(np.zeros(3, dtype=np.float32)).unit()


class TestStubEmbedder:
    def test_same_text_same_vector(self, stub_embedder):
        a, b = stub_embedder.embed_batch(["a", "a"])
        assert np.array_equal(a.values, b.values)

    def test_vectors_normalized(self, stub_embedder):
        (v,) = stub_embedder.embed_batch(["anything at all"])
        assert abs(float(np.linalg.norm(v.values)) - 1.0) < 1e-4
        assert v.normalized

    def test_distinct_texts_reproducible(self):
        spec = EmbedderSpec(kind="stub", model_name="m", dim=8)
        first = Embedder(spec).embed_batch(["x", "y"])
        second = Embedder(spec).embed_batch(["x", "y"])
        assert not np.array_equal(first[0].values, first[1].values)
        assert cosine(first[0], first[1]) == cosine(second[0], second[1])
        assert all(v.dim == 8 for v in first)

    def test_pure_function_of_model_name(self):
        a = stub_vector("text", 8, "model-a")
        b = stub_vector("text", 8, "model-b")
        assert not np.array_equal(a, b)
        assert np.array_equal(a, stub_vector("text", 8, "model-a"))

    def test_empty_inputs_rejected(self, stub_embedder):
        with pytest.raises(ValueError):
            stub_embedder.embed_batch([])
        with pytest.raises(ValueError):
            stub_embedder.embed_batch(["ok", "  "])


def mock_remote_embedder(handler, dim=4, batch_size=32):
    spec = EmbedderSpec(kind="remote", model_name="remote-model", dim=dim,
                        endpoint="http://embed.test/v1/embeddings",
                        batch_size=batch_size)
    client = httpx.Client(transport=httpx.MockTransport(handler))
    return Embedder(spec, client=client, retry_base_delay=0.0)


class TestRemoteEmbedder:
    def test_wire_shape_and_order(self):
        seen = {}

        def handler(request):
            seen["body"] = request.read().decode()
            import json as _json

            payload = _json.loads(seen["body"])
            data = [{"embedding": [float(i + 1), 0.0, 0.0, 0.0]}
                    for i, _ in enumerate(payload["input"])]
            return httpx.Response(200, json={"data": data})

        embedder = mock_remote_embedder(handler)
        vectors = embedder.embed_batch(["first", "second"])
        assert '"model": "remote-model"' in seen["body"] or '"model":"remote-model"' in seen["body"]
        assert vectors[0].values[0] == 1.0 and vectors[1].values[0] == 1.0  # normalized
        assert embedder.calls == 1

    def test_retry_then_success(self):
        attempts = {"n": 0}

        def handler(request):
            attempts["n"] += 1
            if attempts["n"] < 3:
                return httpx.Response(500)
            return httpx.Response(200, json={"data": [{"embedding": [1, 0, 0, 0]}]})

        embedder = mock_remote_embedder(handler)
        vectors = embedder.embed_batch(["x"])
        assert attempts["n"] == 3 and len(vectors) == 1

    def test_transport_exhaustion(self):
        def handler(request):
            return httpx.Response(500)

        embedder = mock_remote_embedder(handler)
        with pytest.raises(EmbeddingTransportError):
            embedder.embed_batch(["x"])

    def test_rate_limit_distinct(self):
        def handler(request):
            return httpx.Response(429)

        embedder = mock_remote_embedder(handler)
        with pytest.raises(EmbeddingRateLimitError):
            embedder.embed_batch(["x"])

    def test_dimension_mismatch(self):
        def handler(request):
            return httpx.Response(200, json={"data": [{"embedding": [1.0, 2.0]}]})

        embedder = mock_remote_embedder(handler)
        with pytest.raises(EmbeddingDimensionError):
            embedder.embed_batch(["x"])


class TestCache:
    def test_second_call_hits(self, tmp_path):
        cache = EmbeddingCache(tmp_path / "cache.bin")
        embedder = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        cache.get_or_embed(embedder, ["one", "two"])
        calls_after_first = embedder.calls
        cache.get_or_embed(embedder, ["one", "two"])
        assert embedder.calls == calls_after_first

    def test_key_includes_model_name(self, tmp_path):
        cache = EmbeddingCache(tmp_path / "cache.bin")
        first = Embedder(EmbedderSpec(kind="stub", model_name="m1", dim=8))
        second = Embedder(EmbedderSpec(kind="stub", model_name="m2", dim=8))
        cache.get_or_embed(first, ["same text"])
        cache.get_or_embed(second, ["same text"])
        assert second.calls == 1

    def test_batch_call_count(self):
        cache = EmbeddingCache()
        embedder = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=4,
                                         batch_size=64))
        texts = [f"text {i}" for i in range(1000)]
        cache.get_or_embed(embedder, texts)
        assert embedder.calls == math.ceil(1000 / 64)

    def test_results_identical_to_embed_batch(self):
        cache = EmbeddingCache()
        embedder = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        direct = embedder.embed_batch(["alpha", "beta"])
        cached = cache.get_or_embed(embedder, ["alpha", "beta"])
        for d, c in zip(direct, cached):
            assert np.array_equal(d.values, c.values)

    def test_disk_round_trip(self, tmp_path):
        path = tmp_path / "cache.bin"
        embedder = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        EmbeddingCache(path).get_or_embed(embedder, ["persist me"])
        reloaded = EmbeddingCache(path)
        assert len(reloaded) == 1
        fresh = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        reloaded.get_or_embed(fresh, ["persist me"])
        assert fresh.calls == 0

    def test_corrupt_tail_recomputed(self, tmp_path):
        path = tmp_path / "cache.bin"
        embedder = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        EmbeddingCache(path).get_or_embed(embedder, ["good record"])
        with path.open("ab") as fh:
            fh.write(b"\x01\x02\x03")  # truncated record
        reloaded = EmbeddingCache(path)
        assert len(reloaded) == 1
        fresh = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        reloaded.get_or_embed(fresh, ["good record", "new text"])
        assert fresh.calls == 1  # only the new text

    def test_duplicates_within_one_call(self):
        cache = EmbeddingCache()
        embedder = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8,
                                         batch_size=10))
        vectors = cache.get_or_embed(embedder, ["dup", "dup", "dup"])
        assert embedder.calls == 1
        assert np.array_equal(vectors[0].values, vectors[2].values)

    def test_concurrent_same_key_coalesced(self):
        cache = EmbeddingCache()
        barrier = threading.Barrier(4)
        slow_calls = []

        class SlowEmbedder(Embedder):
            def _call(self, batch):
                slow_calls.append(list(batch))
                import time

                time.sleep(0.05)
                return super()._call(batch)

        embedder = SlowEmbedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        results = []

        def worker():
            barrier.wait()
            results.append(cache.get_or_embed(embedder, ["shared key"]))

        threads = [threading.Thread(target=worker) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(slow_calls) == 1
        assert all(np.array_equal(r[0].values, results[0][0].values) for r in results)

    def test_caching_embedder_wrapper(self):
        embedder = Embedder(EmbedderSpec(kind="stub", model_name="m", dim=8))
        wrapped = CachingEmbedder(embedder, EmbeddingCache())
        wrapped.embed_batch(["a"])
        wrapped.embed_batch(["a"])
        assert wrapped.calls == 1
        assert wrapped.spec.dim == 8
