#include "mplex/prior.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

namespace mplex {

GammaPriorField structural_prior(const MultilayerNetwork& network,
                                 const SimilarityReport& report, int top_l) {
    if (report.entries.empty())
        throw std::invalid_argument("similarity report is empty");
    if (top_l < 1 || top_l > static_cast<int>(report.entries.size()))
        throw std::invalid_argument("top_l must be in [1, number of non-target layers]");

    const int n = network.n();
    GammaPriorField field;
    field.mode = PriorMode::structural;
    field.alpha = Mat::Constant(n, n, 1.0);
    field.beta = Mat::Constant(n, n, kBetaLarge);

    Mat s1 = Mat::Zero(n, n);
    double s0 = 0.0;
    for (int r = 0; r < top_l; ++r) {
        const auto& [layer_id, mu_raw] = report.entries[r];
        const double mu = std::clamp(mu_raw, 0.0, 1.0);
        field.contributing_layers.emplace_back(layer_id, mu);
        s1 += mu * network.layer(layer_id).adjacency;
        s0 += mu;
    }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = s1(i, j);
            if (v >= 1.0) {
                field.alpha(i, j) = v;
                field.beta(i, j) = std::max(s0, s0 / v);
            } else if (v > 0.0) {
                field.alpha(i, j) = 1.0;
                field.beta(i, j) = s0 / v;
            }
            // v == 0 keeps the (1, kBetaLarge) fill
        }
    }
    return field;
}

GammaPriorField functional_prior(const MultilayerNetwork& aux_network) {
    if (aux_network.layers.empty())
        throw std::invalid_argument("auxiliary network has no layers");
    const int n = aux_network.n();
    const auto layer_count = static_cast<double>(aux_network.layers.size());

    Mat sum = Mat::Zero(n, n);
    GammaPriorField field;
    field.mode = PriorMode::functional;
    for (const auto& l : aux_network.layers) {
        sum += l.adjacency;
        field.contributing_layers.emplace_back(l.layer_id, 1.0);
    }

    field.alpha = Mat::Constant(n, n, 1.0);
    field.beta = Mat::Constant(n, n, kBetaLarge);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (sum(i, j) >= 1.0) {
                field.alpha(i, j) = sum(i, j);
                field.beta(i, j) = layer_count;
            }
        }
    }
    return field;
}

GammaPriorField flat_prior(int n) {
    if (n < 1)
        throw std::invalid_argument("flat prior needs n >= 1");
    GammaPriorField field;
    field.mode = PriorMode::flat;
    field.alpha = Mat::Constant(n, n, 1.0);
    field.beta = Mat::Zero(n, n);
    return field;
}

namespace {

const char* mode_name(PriorMode m) {
    switch (m) {
    case PriorMode::structural: return "structural";
    case PriorMode::functional: return "functional";
    case PriorMode::flat: return "flat";
    }
    return "?";
}

PriorMode mode_from(const std::string& s) {
    if (s == "structural") return PriorMode::structural;
    if (s == "functional") return PriorMode::functional;
    if (s == "flat") return PriorMode::flat;
    throw std::runtime_error("unknown prior mode: " + s);
}

constexpr char kMagic[8] = {'M', 'P', 'X', 'P', 'R', 'I', '0', '1'};

} // namespace

void GammaPriorField::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write prior file: " + path);
    const std::int64_t dim = n();
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(alpha.data()),
              static_cast<std::streamsize>(sizeof(double)) * dim * dim);
    out.write(reinterpret_cast<const char*>(beta.data()),
              static_cast<std::streamsize>(sizeof(double)) * dim * dim);
    if (!out)
        throw std::runtime_error("short write on prior file: " + path);

    nlohmann::json j;
    j["mode"] = mode_name(mode);
    j["beta_large"] = kBetaLarge;
    auto& mus = j["contributing_layers"] = nlohmann::json::array();
    for (const auto& [id, mu] : contributing_layers)
        mus.push_back({{"layer", id}, {"mu", mu}});
    std::ofstream side(path + ".json");
    side << j.dump(2) << '\n';
}

GammaPriorField GammaPriorField::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open prior file: " + path);
    char magic[8];
    std::int64_t dim = 0;
    in.read(magic, sizeof magic);
    if (!in || !std::equal(magic, magic + 8, kMagic))
        throw std::runtime_error("bad prior file magic: " + path);
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    if (!in || dim < 1)
        throw std::runtime_error("bad prior file header: " + path);

    GammaPriorField field;
    field.alpha.resize(dim, dim);
    field.beta.resize(dim, dim);
    in.read(reinterpret_cast<char*>(field.alpha.data()),
            static_cast<std::streamsize>(sizeof(double)) * dim * dim);
    in.read(reinterpret_cast<char*>(field.beta.data()),
            static_cast<std::streamsize>(sizeof(double)) * dim * dim);
    if (!in)
        throw std::runtime_error("truncated prior file: " + path);

    std::ifstream side(path + ".json");
    if (side) {
        nlohmann::json j;
        side >> j;
        field.mode = mode_from(j.at("mode").get<std::string>());
        for (const auto& e : j.at("contributing_layers"))
            field.contributing_layers.emplace_back(e.at("layer").get<std::string>(),
                                                   e.at("mu").get<double>());
    }
    return field;
}

} // namespace mplex
