#include "mplex/simhash.hpp"
#include "mplex/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace mplex {

void validate_phi(int phi) {
    if (phi < kMinPhi || phi > kMaxPhi || (phi & (phi - 1)) != 0)
        throw std::invalid_argument("phi must be a power of two in [16, 4096]");
}

std::vector<std::uint64_t> token_digest(const std::string& token, int phi,
                                        std::uint64_t hash_seed) {
    validate_phi(phi);
    const std::uint64_t h0 = fnv1a64(token.data(), token.size());
    const int words = (phi + 63) / 64;
    std::vector<std::uint64_t> bits(words);
    for (int b = 0; b < words; ++b)
        bits[b] = mix64(h0 + mix64(hash_seed + static_cast<std::uint64_t>(b)));
    if (phi < 64)
        bits[0] &= (1ull << phi) - 1;
    return bits;
}

LayerDigest layer_digest(const CentralityVector& centrality, const NodeRegistry& nodes,
                         int phi, std::uint64_t hash_seed) {
    validate_phi(phi);
    const int n = static_cast<int>(centrality.values.size());
    if (n < 1)
        throw std::invalid_argument("centrality vector is empty");
    if (n != nodes.size())
        throw std::invalid_argument("centrality length does not match node registry");

    LayerDigest d;
    d.layer_id = centrality.layer_id;
    d.phi = phi;
    d.weighted = Vec::Zero(phi);
    d.binary.assign((phi + 63) / 64, 0);

    for (int i = 0; i < n; ++i) {
        const double w = centrality.values[i];
        if (w == 0.0)
            continue; // sign irrelevant, contributes nothing
        const auto bits = token_digest(nodes.label(i), phi, hash_seed);
        for (int k = 0; k < phi; ++k) {
            const bool one = (bits[k >> 6] >> (k & 63)) & 1u;
            d.weighted[k] += one ? w : -w;
        }
    }
    for (int k = 0; k < phi; ++k)
        if (d.weighted[k] > 0.0)
            d.binary[k >> 6] |= 1ull << (k & 63);
    d.degenerate = (d.weighted.array() == 0.0).all();
    return d;
}

double hamming_similarity(const LayerDigest& d1, const LayerDigest& d2) {
    if (d1.phi != d2.phi)
        throw std::invalid_argument("digest sizes differ");
    int differing = 0;
    for (std::size_t w = 0; w < d1.binary.size(); ++w)
        differing += std::popcount(d1.binary[w] ^ d2.binary[w]);
    return 1.0 - static_cast<double>(differing) / static_cast<double>(d1.phi);
}

double pearson_similarity(const LayerDigest& d1, const LayerDigest& d2) {
    if (d1.phi != d2.phi)
        throw std::invalid_argument("digest sizes differ");
    const Vec x = d1.weighted.array() - d1.weighted.mean();
    const Vec y = d2.weighted.array() - d2.weighted.mean();
    const double sx = x.norm(), sy = y.norm();
    if (sx == 0.0 || sy == 0.0)
        throw std::domain_error("correlation undefined for a constant weighted digest");
    return x.dot(y) / (sx * sy);
}

namespace {

double similarity(const LayerDigest& a, const LayerDigest& b, SimMethod method) {
    return method == SimMethod::hamming ? hamming_similarity(a, b)
                                        : pearson_similarity(a, b);
}

} // namespace

SimilarityReport rank_against(const MultilayerNetwork& network, const Layer& probe,
                              const std::string& exclude_id, int phi, SimMethod method,
                              std::uint64_t hash_seed, int hash_seed_count) {
    validate_phi(phi);
    if (hash_seed_count < 1)
        throw std::invalid_argument("hash_seed_count must be >= 1");

    std::vector<const Layer*> others;
    for (const auto& l : network.layers)
        if (l.layer_id != exclude_id)
            others.push_back(&l);
    if (others.empty())
        throw std::invalid_argument("no comparison layers");

    const CentralityVector probe_cv = eigenvector_centrality(probe);
    std::vector<CentralityVector> other_cv;
    other_cv.reserve(others.size());
    for (const Layer* l : others)
        other_cv.push_back(eigenvector_centrality(*l));

    std::vector<double> sums(others.size(), 0.0);
    for (int s = 0; s < hash_seed_count; ++s) {
        const std::uint64_t seed = hash_seed + static_cast<std::uint64_t>(s);
        const LayerDigest probe_digest = layer_digest(probe_cv, network.nodes, phi, seed);
        for (std::size_t k = 0; k < others.size(); ++k) {
            const LayerDigest d = layer_digest(other_cv[k], network.nodes, phi, seed);
            sums[k] += similarity(probe_digest, d, method);
        }
    }

    SimilarityReport report;
    report.target_id = exclude_id;
    report.method = method;
    for (std::size_t k = 0; k < others.size(); ++k)
        report.entries.emplace_back(others[k]->layer_id, sums[k] / hash_seed_count);
    std::sort(report.entries.begin(), report.entries.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second)
                      return a.second > b.second;
                  return a.first < b.first;
              });
    return report;
}

SimilarityReport rank_layers(const MultilayerNetwork& network, const std::string& target_id,
                             int phi, SimMethod method, std::uint64_t hash_seed,
                             int hash_seed_count) {
    return rank_against(network, network.layer(target_id), target_id, phi, method,
                        hash_seed, hash_seed_count);
}

} // namespace mplex
