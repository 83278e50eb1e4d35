#include "mplex/graph.hpp"
#include "mplex/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mplex {

int NodeRegistry::add(const std::string& label) {
    auto it = index_.find(label);
    if (it != index_.end())
        return it->second;
    const int idx = static_cast<int>(labels_.size());
    labels_.push_back(label);
    index_.emplace(label, idx);
    return idx;
}

int NodeRegistry::index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

const Layer* MultilayerNetwork::find_layer(const std::string& id) const {
    for (const auto& l : layers)
        if (l.layer_id == id)
            return &l;
    return nullptr;
}

const Layer& MultilayerNetwork::layer(const std::string& id) const {
    const Layer* l = find_layer(id);
    if (!l)
        throw std::invalid_argument("unknown layer: " + id);
    return *l;
}

namespace {

struct RawEdge {
    int layer;
    int src;
    int dst;
    double weight;
};

[[noreturn]] void parse_fail(const std::string& origin, long line_no, const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line_no << ": " << what;
    throw ParseError(os.str());
}

} // namespace

MultilayerNetwork parse_multiplex(std::istream& in, bool directed, bool binarize,
                                  const std::string& origin) {
    MultilayerNetwork net;
    std::vector<std::string> layer_ids;
    std::unordered_map<std::string, int> layer_index;
    std::vector<RawEdge> edges;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);

        std::istringstream fields(line);
        std::string layer_id, src, dst, weight_str, extra;
        if (!(fields >> layer_id))
            continue; // blank
        if (!(fields >> src >> dst))
            parse_fail(origin, line_no, "expected `layer_id source target [weight]`");

        double weight = 1.0;
        if (fields >> weight_str) {
            std::size_t pos = 0;
            try {
                weight = std::stod(weight_str, &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != weight_str.size() || !std::isfinite(weight))
                parse_fail(origin, line_no, "non-numeric weight `" + weight_str + "`");
            if (weight < 0)
                parse_fail(origin, line_no, "negative weight");
        }
        if (fields >> extra)
            parse_fail(origin, line_no, "too many fields");
        if (src == dst)
            parse_fail(origin, line_no, "self-loop on node `" + src + "`");

        int lidx;
        if (auto it = layer_index.find(layer_id); it != layer_index.end()) {
            lidx = it->second;
        } else {
            lidx = static_cast<int>(layer_ids.size());
            layer_ids.push_back(layer_id);
            layer_index.emplace(layer_id, lidx);
        }
        edges.push_back({lidx, net.nodes.add(src), net.nodes.add(dst), weight});
    }

    const int n = net.nodes.size();
    net.layers.reserve(layer_ids.size());
    for (const auto& id : layer_ids)
        net.layers.push_back({id, directed, Mat::Zero(n, n)});

    for (const auto& e : edges) {
        Mat& a = net.layers[e.layer].adjacency;
        a(e.src, e.dst) += e.weight;
        if (!directed)
            a(e.dst, e.src) += e.weight;
    }
    if (binarize)
        for (auto& l : net.layers)
            l.adjacency = (l.adjacency.array() > 0.0).cast<double>();
    return net;
}

MultilayerNetwork load_multiplex(const std::string& path, bool directed, bool binarize) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open network file: " + path);
    return parse_multiplex(in, directed, binarize, path);
}

void write_multiplex(const MultilayerNetwork& net, std::ostream& out) {
    char buf[64];
    for (const auto& l : net.layers) {
        const int n = l.n();
        for (int i = 0; i < n; ++i) {
            const int j0 = l.directed ? 0 : i + 1;
            for (int j = j0; j < n; ++j) {
                const double w = l.adjacency(i, j);
                if (w <= 0.0 || i == j)
                    continue;
                std::snprintf(buf, sizeof buf, "%.17g", w);
                out << l.layer_id << ' ' << net.nodes.label(i) << ' '
                    << net.nodes.label(j) << ' ' << buf << '\n';
            }
        }
    }
}

std::vector<std::pair<int, int>> edge_list(const Layer& layer) {
    std::vector<std::pair<int, int>> edges;
    const int n = layer.n();
    for (int i = 0; i < n; ++i) {
        const int j0 = layer.directed ? 0 : i + 1;
        for (int j = j0; j < n; ++j)
            if (j != i && layer.adjacency(i, j) > 0.0)
                edges.emplace_back(i, j);
    }
    return edges;
}

long edge_count(const Layer& layer) {
    return static_cast<long>(edge_list(layer).size());
}

std::pair<Layer, RemovalPlan> remove_edges(const Layer& layer, double fraction,
                                           std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("removal fraction must be in [0, 1]");

    auto edges = edge_list(layer);
    const auto m = static_cast<long>(edges.size());
    const auto k = static_cast<long>(std::llround(fraction * static_cast<double>(m)));

    // partial Fisher-Yates: the first k slots end up a uniform k-subset
    Rng rng(seed);
    for (long t = 0; t < k; ++t) {
        const long pick = t + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(m - t)));
        std::swap(edges[t], edges[pick]);
    }

    Layer reduced = layer;
    RemovalPlan plan;
    plan.fraction = fraction;
    plan.seed = seed;
    plan.removed.assign(edges.begin(), edges.begin() + k);
    for (const auto& [i, j] : plan.removed) {
        reduced.adjacency(i, j) = 0.0;
        if (!layer.directed)
            reduced.adjacency(j, i) = 0.0;
    }
    return {std::move(reduced), std::move(plan)};
}

std::string RemovalPlan::to_json() const {
    nlohmann::json j;
    j["fraction"] = fraction;
    j["seed"] = seed;
    auto& arr = j["removed"] = nlohmann::json::array();
    for (const auto& [a, b] : removed)
        arr.push_back({a, b});
    return j.dump();
}

RemovalPlan RemovalPlan::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RemovalPlan plan;
    plan.fraction = j.at("fraction").get<double>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("removed"))
        plan.removed.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return plan;
}

} // namespace mplex
