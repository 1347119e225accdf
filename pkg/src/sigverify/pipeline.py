"""Configured verification pipeline: preprocess -> features -> matcher -> scores."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from . import alignment, features, pathsig, preprocess, scoring
from .config import TIME_FUNCTION_EXTRACTORS, PipelineConfig
from .errors import ValidationError
from .ingest import ComparisonList, DatasetManifest, RawSignature


class Pipeline:
    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config

    def prepare(self, sig: RawSignature) -> RawSignature:
        p = self.config.preprocess
        for step in p.steps:
            if step == "drop_zero_pressure":
                if sig.p is None and p.skip_missing_pressure:
                    continue
                sig = preprocess.drop_zero_pressure(sig)
            elif step == "resample_uniform":
                sig = preprocess.resample_uniform(sig, p.target_hz)
            elif step == "scale_center":
                sig = preprocess.scale_center(sig, p.scale_target)
        return sig

    def extract(self, sig: RawSignature) -> list:
        """One feature object per configured extractor."""
        f = self.config.features
        sig = self.prepare(sig)
        out = []
        for name in f.extractors:
            if name in TIME_FUNCTION_EXTRACTORS:
                tfm = {
                    "baseline": features.extract_baseline,
                    "dlvc12": features.extract_dlvc12,
                    "sig9": features.extract_sig9,
                }[name](sig)
                if f.znorm:
                    policy = "constant_one" if (name == "dlvc12" and sig.p is None
                                                and f.finger_pressure == "constant_one") else "as_is"
                    tfm = features.znorm_channels(tfm, policy)
                out.append(tfm)
            elif name == "mad13":
                out.append(features.extract_mad13(sig))
            elif name == "pathsig":
                out.append(pathsig.extract_pathsig(sig, f.pathsig_depth, f.pathsig_full))
        return out

    def distance(self, fa, fb) -> float:
        if isinstance(fa, features.GlobalFeatureVector):
            return float(np.linalg.norm(features.feature_diff(fa, fb).values))
        m = self.config.matcher
        if m.name == "softdtw":
            return alignment.soft_dtw(fa, fb, m.gamma, m.metric)
        res = alignment.dtw(fa, fb, m.metric)
        return res.normalized_score if m.normalize else res.cumulative_cost

    def stream_score(self, d: float, k: int) -> float:
        """Distance of stream ``k`` -> higher-is-genuine (normalised) score."""
        s = self.config.scorer
        orientation = s.orientation
        if s.threshold == "sigstat_local":
            d = scoring.sigstat_local_score(d, s.g_th, s.f_th, s.s)
            orientation = "higher_is_genuine"
        elif s.threshold == "sigstat_global":
            # grows with the forgery likelihood
            d = scoring.sigstat_global_score(d, s.d_g_min, s.d_f_med)
            orientation = "lower_is_genuine"
        v = float(scoring.to_similarity([d], orientation)[0])
        if s.normalization == "tanh":
            v = float(scoring.tanh_normalize([v], s.tanh_mu[k], s.tanh_sigma[k])[0])
        return v

    def score_features(self, fa: Sequence, fb: Sequence) -> float:
        per_stream = [self.stream_score(self.distance(a, b), k) for k, (a, b) in enumerate(zip(fa, fb))]
        if len(per_stream) == 1 and not self.config.scorer.weights:
            return per_stream[0]
        return scoring.fuse_weighted(per_stream, self.config.scorer.weights)

    def compare(self, reference: RawSignature, probe: RawSignature) -> float:
        return self.score_features(self.extract(reference), self.extract(probe))

    def score_comparisons(self, manifest: DatasetManifest, comparisons: ComparisonList,
                          workers: int = 1) -> list[float]:
        """Scores in comparison order; independent of ``workers``."""
        for k, c in enumerate(comparisons, start=1):
            for sid in (c.reference_id, c.probe_id):
                if sid not in manifest.signatures:
                    raise ValidationError(f"comparisons line {k}: unknown signature id {sid!r}")
        ids = sorted(comparisons.ids)

        def load_extract(sid):
            return sid, self.extract(manifest.load(sid))

        def score(c):
            return self.score_features(feats[c.reference_id], feats[c.probe_id])

        workers = max(1, int(workers))
        if workers == 1:
            feats = dict(map(load_extract, ids))
            return [score(c) for c in comparisons]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            feats = dict(pool.map(load_extract, ids))
            return list(pool.map(score, comparisons))
