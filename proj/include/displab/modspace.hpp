#pragma once

#include <map>
#include <string>
#include <vector>

#include "displab/field.hpp"
#include "displab/windows.hpp"

namespace displab {

/// Modulation norm M^s_{p,q}: (sum_k <k>^{qs} ||Box_k f||_p^q)^{1/q},
/// sup over k when q = inf; <k> = (1 + |k|^2)^{1/2}.
struct ModNormSpec {
    double s = 0.0;
    double p = 2.0;
    double q = 2.0;
};

/// Frequency-uniform decomposition: component k has spectrum sigma_k * fhat.
/// Components whose spectral data all sit below 1e-14 in modulus are omitted.
/// Rejects fields whose spectrum leaks past the covered window lattice.
std::map<KVec, Field> box_decompose(const Field& f, const WindowFamily& windows);

double modulation_norm(const Field& f, const ModNormSpec& spec,
                       const WindowFamily& windows);

/// ||<D>^alpha f||_p with the Fourier multiplier (1 + |xi|^2)^(alpha/2).
double sobolev_lp_norm(const Field& f, double alpha, double p);

struct EmbeddingCheck {
    std::string name;
    double worst_constant = 0.0;  // smallest C with lhs >= rhs / C on the set
    int worst_index = -1;
    bool ok = false;
};

struct EmbeddingReport {
    std::vector<EmbeddingCheck> checks;
    bool all_ok(double budget) const;
};

/// Verifies the embedding chain on a test set, up to one set-wide constant:
///   M^s_{p,q1} >~ M^s_{p,q2} (q1 <= q2),   M^s_{p1,q} >~ M^s_{p2,q} (p1 <= p2),
///   M_{p,p'} >~ L^p >~ M_{p,p} (p >= 2),
///   M^{s1}_{p,q1} >~ M^{s2}_{p,q2} when s1 - s2 > d (1/q2 - 1/q1) > 0.
EmbeddingReport check_embeddings(const std::vector<Field>& testset,
                                 const WindowFamily& windows);

/// ||f1 f2||_{M^s_{p,1}} / (||f1||_{M^s_{p1,1}} ||f2||_{M^s_{p2,1}})
/// for 1/p = 1/p1 + 1/p2. Requires the product to stay band-limited.
double product_norm_check(const Field& f1, const Field& f2, double s, double p,
                          double p1, double p2, const WindowFamily& windows);

}  // namespace displab
