#pragma once

#include "mplex/centrality.hpp"
#include "mplex/graph.hpp"

#include <cstdint>

namespace mplex {

/// Default seed for token bit patterns. Fixed so digests are reproducible
/// across runs and platforms; pass a different seed to re-randomize the
/// token encoding (e.g. when averaging similarities over hash seeds).
inline constexpr std::uint64_t kTokenHashSeed = 0xC3A5C85C97CB3127ull;

inline constexpr int kDefaultPhi = 512;
inline constexpr int kMinPhi = 16;
inline constexpr int kMaxPhi = 4096;

enum class SimMethod { hamming, pearson };

/// phi-bit fingerprint of one layer: the signed accumulator vector and the
/// bit vector obtained by thresholding it at zero (ties map to 0).
struct LayerDigest {
    std::string layer_id;
    int phi = kDefaultPhi;
    Vec weighted;                      // length phi
    std::vector<std::uint64_t> binary; // phi bits, low bit first per word
    bool degenerate = false;           // weighted identically zero

    bool bit(int k) const { return (binary[k >> 6] >> (k & 63)) & 1u; }
};

/// Non-target layers sorted by similarity to the target, descending
/// (ties broken by layer_id).
struct SimilarityReport {
    std::string target_id;
    SimMethod method = SimMethod::hamming;
    std::vector<std::pair<std::string, double>> entries;
    bool extrapolated = false; // ranking computed from a stand-in probe
};

void validate_phi(int phi);

/// Deterministic phi-bit pattern for a token label: 64-bit blocks keyed by
/// (label, block_index) under the seed.
std::vector<std::uint64_t> token_digest(const std::string& token, int phi,
                                        std::uint64_t hash_seed = kTokenHashSeed);

/// Sum of signed token patterns over the registry's node labels: bit 1
/// contributes +w_i, bit 0 contributes -w_i, each accumulator position
/// independent (no carries).
LayerDigest layer_digest(const CentralityVector& centrality, const NodeRegistry& nodes,
                         int phi, std::uint64_t hash_seed = kTokenHashSeed);

/// Eq-style Hamming similarity: 1 - (differing bits)/phi, in [0, 1].
double hamming_similarity(const LayerDigest& d1, const LayerDigest& d2);

/// Pearson correlation of the weighted digests, in [-1, 1]. Throws if a
/// weighted vector is constant (correlation undefined).
double pearson_similarity(const LayerDigest& d1, const LayerDigest& d2);

/// Compare a probe layer against every layer of the network except
/// exclude_id. hash_seed_count > 1 averages similarities over consecutive
/// seeds hash_seed, hash_seed+1, ...
SimilarityReport rank_against(const MultilayerNetwork& network, const Layer& probe,
                              const std::string& exclude_id, int phi, SimMethod method,
                              std::uint64_t hash_seed = kTokenHashSeed,
                              int hash_seed_count = 1);

/// Rank all non-target layers by similarity to the target layer.
SimilarityReport rank_layers(const MultilayerNetwork& network, const std::string& target_id,
                             int phi = kDefaultPhi, SimMethod method = SimMethod::hamming,
                             std::uint64_t hash_seed = kTokenHashSeed,
                             int hash_seed_count = 1);

} // namespace mplex
