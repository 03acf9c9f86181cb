#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace netcap {

using VertexId = std::string;
using EdgeId = std::string;

struct EdgeSpec {
    EdgeId id;
    VertexId tail;
    VertexId head;
};

// Unvalidated network description, as read from a file or builder.
struct RawNetwork {
    std::string name;
    std::vector<VertexId> vertices;
    std::vector<EdgeSpec> edges;
    VertexId source;
    std::vector<VertexId> terminals;
};

// A violated network axiom. Axiom numbers follow the defining properties of
// a single-source network: 1 finite acyclic multigraph, 2 source is a vertex,
// 3 terminals are vertices, 4 at least one terminal and source not a
// terminal, 5 source has no incoming / terminals no outgoing edges,
// 6 every terminal reachable from the source, 7 every intermediate vertex on
// some source-terminal path. 0 is used for structural defects (duplicate
// ids, dangling endpoints) that precede the axioms.
struct AxiomViolation {
    int axiom;
    std::string message;
};

// Total order on edges extending the path partial order: if a directed path
// starts with e and ends with e', then rank(e) <= rank(e').
struct EdgeOrder {
    std::map<EdgeId, int> rank;  // 1-based
};

// A validated, immutable single-source multicast network. Vertices and edges
// are exposed through dense indices; edge index order IS the canonical edge
// order (topological layer of the tail vertex, ties broken by natural id
// comparison).
class Network {
public:
    // Returns the validated network, or the complete list of violated axioms.
    static std::optional<Network> validate(const RawNetwork& raw,
                                           std::vector<AxiomViolation>* violations = nullptr);

    // Throwing convenience wrapper around validate().
    static Network validate_or_throw(const RawNetwork& raw);

    const std::string& name() const { return name_; }
    int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
    int edge_count() const { return static_cast<int>(edge_tail_.size()); }

    const VertexId& vertex_id(int v) const { return vertex_ids_[v]; }
    const EdgeId& edge_id(int e) const { return edge_ids_[e]; }
    int edge_tail(int e) const { return edge_tail_[e]; }
    int edge_head(int e) const { return edge_head_[e]; }
    int vertex_index(const VertexId& id) const;
    int edge_index(const EdgeId& id) const;

    int source() const { return source_; }
    const std::vector<int>& terminals() const { return terminals_; }
    bool is_terminal(int v) const;
    bool is_intermediate(int v) const { return v != source_ && !is_terminal(v); }

    // In/out edge indices per vertex, ascending in canonical edge order.
    const std::vector<int>& in_edges(int v) const { return in_edges_[v]; }
    const std::vector<int>& out_edges(int v) const { return out_edges_[v]; }

    // Vertices in a topological order (source first).
    const std::vector<int>& topo_order() const { return topo_order_; }

    // Longest-path-from-source layer per vertex.
    int layer(int v) const { return layer_[v]; }

    EdgeOrder canonical_edge_order() const;

    // Minimum number of edges whose removal disconnects the source from
    // terminal t (unit-capacity max-flow). Throws if t is not a terminal.
    int min_cut(int terminal) const;

    // Minimum of min_cut over all terminals.
    int mu() const;

    RawNetwork to_raw() const;

private:
    Network() = default;

    std::string name_;
    std::vector<VertexId> vertex_ids_;
    std::vector<EdgeId> edge_ids_;
    std::vector<int> edge_tail_;
    std::vector<int> edge_head_;
    std::map<VertexId, int> vertex_index_;
    std::map<EdgeId, int> edge_index_;
    int source_ = -1;
    std::vector<int> terminals_;
    std::vector<char> terminal_mask_;
    std::vector<std::vector<int>> in_edges_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<int> topo_order_;
    std::vector<int> layer_;
};

// Natural comparison for ids: digit runs compare numerically, so e2 < e10.
bool natural_less(const std::string& a, const std::string& b);

// Supersource transform: new source S' connected to the old source by
// mu(n) parallel edges. Preserves mu.
Network add_supersource(const Network& n);

// Intermediate vertices with exactly one incoming edge; for these the
// network code may be fixed to replication without loss of generality.
std::set<VertexId> routing_fixable_vertices(const Network& n);

// Builtin instances. Names: "butterfly", "combination:N,K", "fig3".
// fig3 is loaded from the data directory (see data_dir()).
Network builtin_network(const std::string& name);
std::vector<std::string> builtin_names();

// Directory holding shipped instance files; NETCAP_DATA_DIR overrides the
// compiled-in default.
std::string data_dir();

RawNetwork make_butterfly();
RawNetwork make_combination(int n, int k);

}  // namespace netcap
