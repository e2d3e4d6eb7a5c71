#pragma once

#include <map>
#include <string>
#include <vector>

#include "displab/field.hpp"
#include "displab/sweep.hpp"

namespace displab {

/// Flat experiment configuration. Fields not used by a given experiment are
/// ignored; zeros mean "auto-size per scale".
struct ExperimentConfig {
    int d = 1;
    int n = 0;        // samples per axis (0 = auto)
    double L = 0.0;   // box length (0 = auto)
    double p = 4.0;   // mixed/space-time integrability
    double q = 4.0;   // spatial integrability (or modulation q)
    double r = 4.0;   // datum Lebesgue exponent
    double s = 0.0;   // regularity
    int k = 0;        // signature
    double eps_phase = 0.01;  // perturbed-phase strength
    std::vector<double> scales;
    double tolerance = 0.1;
    std::uint64_t seed = 1;
    int workers = 1;
    int corpus = 32;  // corpus size for set-based experiments

    std::string canonical(const std::string& experiment) const;
};

const std::vector<std::string>& experiment_names();

/// Runs one named experiment: {embedding, fixed_time, knapp_aniso_local,
/// knapp_aniso_global, knapp_high, knapp_iso, strichartz_mod, strichartz_m41,
/// mp1, kernel, decouple_const, decouple_var, rescale_check, approx_lemma,
/// nls_picard, nls_identity, nls_monitor}. Deterministic for a fixed
/// fingerprint regardless of the worker count.
SweepResult run_experiment(const std::string& kind, const ExperimentConfig& cfg);

/// Random band-limited field: seeded Gaussian spectrum inside |xi|_inf <= band
/// with a smooth envelope, normalized to unit L^2.
Field random_band_limited(const Grid& g, double band, std::uint64_t seed);

/// Corpus used by the embedding/product checks (mix of random band-limited
/// fields, Gaussians and modulated Gaussians).
std::vector<Field> embedding_corpus(const Grid& g, int count,
                                    std::uint64_t seed);

/// Map independent sweep points over a small worker pool; results are
/// gathered by index so the output is scheduling-independent.
std::vector<SweepRecord> parallel_records(
    int count, int workers, const std::function<SweepRecord(int)>& fn);

}  // namespace displab
