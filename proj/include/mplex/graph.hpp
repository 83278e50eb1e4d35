#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mplex {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Thrown on malformed input files; message carries file/line context.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense 0-based node index <-> external label mapping. Labels are unique.
class NodeRegistry {
public:
    int add(const std::string& label);          // inserts if new
    int index_of(const std::string& label) const; // -1 if absent
    const std::string& label(int index) const { return labels_.at(index); }
    const std::vector<std::string>& labels() const { return labels_; }
    int size() const { return static_cast<int>(labels_.size()); }
    bool operator==(const NodeRegistry& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

/// One layer of a multiplex: dense non-negative adjacency over the shared
/// node set. Undirected layers are kept exactly symmetric; the diagonal is
/// always zero (self-loops are rejected at ingest).
struct Layer {
    std::string layer_id;
    bool directed = false;
    Mat adjacency;

    int n() const { return static_cast<int>(adjacency.rows()); }
};

struct MultilayerNetwork {
    NodeRegistry nodes;
    std::vector<Layer> layers;

    int n() const { return nodes.size(); }
    const Layer* find_layer(const std::string& id) const;
    const Layer& layer(const std::string& id) const; // throws if absent
};

/// Record of one seeded edge removal. Pairs are (i, j) with i < j for
/// undirected layers, ordered pairs for directed ones.
struct RemovalPlan {
    double fraction = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::pair<int, int>> removed;

    std::string to_json() const;
    static RemovalPlan from_json(const std::string& text);
};

/// Parse the multiplex edge-list format: `layer_id source target [weight]`,
/// whitespace separated, `#` starts a comment, blank lines ignored.
/// Node registry is the union of labels in first-appearance order; duplicate
/// pair lines accumulate, then clip to 1 under binarize.
MultilayerNetwork load_multiplex(const std::string& path, bool directed, bool binarize);
MultilayerNetwork parse_multiplex(std::istream& in, bool directed, bool binarize,
                                  const std::string& origin = "<stream>");

/// Canonical edge-list serialization; reloading yields identical adjacency.
void write_multiplex(const MultilayerNetwork& net, std::ostream& out);

/// Edges with positive weight: unordered (i < j) pairs for undirected
/// layers, ordered pairs for directed ones.
std::vector<std::pair<int, int>> edge_list(const Layer& layer);

long edge_count(const Layer& layer);

/// Copy of the layer with round(fraction * m) distinct edges zeroed (both
/// directions for undirected layers), chosen uniformly under the seed.
std::pair<Layer, RemovalPlan> remove_edges(const Layer& layer, double fraction,
                                           std::uint64_t seed);

} // namespace mplex
