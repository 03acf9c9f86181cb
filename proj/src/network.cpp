#include "netcap/network.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <queue>
#include <stdexcept>

#include "netcap/json_io.hpp"

namespace netcap {

bool natural_less(const std::string& a, const std::string& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) &&
            std::isdigit(static_cast<unsigned char>(b[j]))) {
            size_t i2 = i, j2 = j;
            while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
            while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
            // compare numeric runs by (length after stripping zeros, digits)
            auto sa = a.substr(i, i2 - i), sb = b.substr(j, j2 - j);
            auto za = sa.find_first_not_of('0'), zb = sb.find_first_not_of('0');
            sa = za == std::string::npos ? "" : sa.substr(za);
            sb = zb == std::string::npos ? "" : sb.substr(zb);
            if (sa.size() != sb.size()) return sa.size() < sb.size();
            if (sa != sb) return sa < sb;
            i = i2;
            j = j2;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

std::optional<Network> Network::validate(const RawNetwork& raw,
                                         std::vector<AxiomViolation>* violations) {
    std::vector<AxiomViolation> errs;
    auto fail = [&](int axiom, const std::string& msg) { errs.push_back({axiom, msg}); };

    // structural checks first: ids must be unique, endpoints must exist
    std::map<VertexId, int> vidx;
    for (const auto& v : raw.vertices) {
        if (!vidx.emplace(v, static_cast<int>(vidx.size())).second)
            fail(0, "duplicate vertex id '" + v + "'");
    }
    std::map<EdgeId, int> eidx;
    bool endpoints_ok = true;
    for (const auto& e : raw.edges) {
        if (!eidx.emplace(e.id, static_cast<int>(eidx.size())).second)
            fail(0, "duplicate edge id '" + e.id + "'");
        if (!vidx.count(e.tail)) {
            fail(0, "edge '" + e.id + "' has unknown tail '" + e.tail + "'");
            endpoints_ok = false;
        }
        if (!vidx.count(e.head)) {
            fail(0, "edge '" + e.id + "' has unknown head '" + e.head + "'");
            endpoints_ok = false;
        }
    }
    if (!vidx.count(raw.source)) {
        fail(2, "source '" + raw.source + "' is not a vertex");
        endpoints_ok = false;
    }
    std::vector<int> terms;
    std::vector<char> term_mask(raw.vertices.size(), 0);
    for (const auto& t : raw.terminals) {
        auto it = vidx.find(t);
        if (it == vidx.end()) {
            fail(3, "terminal '" + t + "' is not a vertex");
        } else if (!term_mask[it->second]) {
            term_mask[it->second] = 1;
            terms.push_back(it->second);
        }
    }
    if (!endpoints_ok || !errs.empty()) {
        // structural defects make the graph checks unreliable; still report
        // the cheap axiom checks that do not need the graph
        if (terms.empty()) fail(4, "network has no terminals");
        if (violations) *violations = errs;
        if (!errs.empty()) return std::nullopt;
    }

    const int nv = static_cast<int>(raw.vertices.size());
    const int ne = static_cast<int>(raw.edges.size());
    int src = vidx.at(raw.source);

    if (terms.empty()) fail(4, "network has no terminals");
    if (term_mask.size() > static_cast<size_t>(src) && term_mask[src])
        fail(4, "source '" + raw.source + "' is listed as a terminal");

    std::vector<std::vector<int>> out(nv), in(nv);
    for (int e = 0; e < ne; ++e) {
        out[vidx.at(raw.edges[e].tail)].push_back(e);
        in[vidx.at(raw.edges[e].head)].push_back(e);
    }

    if (!in[src].empty())
        fail(5, "source '" + raw.source + "' has " + std::to_string(in[src].size()) +
                    " incoming edge(s)");
    for (int t : terms)
        if (!out[t].empty())
            fail(5, "terminal '" + raw.vertices[t] + "' has " +
                        std::to_string(out[t].size()) + " outgoing edge(s)");

    // acyclicity via Kahn's algorithm
    std::vector<int> indeg(nv);
    for (int v = 0; v < nv; ++v) indeg[v] = static_cast<int>(in[v].size());
    std::vector<int> topo;
    std::vector<int> stack;
    for (int v = 0; v < nv; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        topo.push_back(v);
        for (int e : out[v])
            if (--indeg[vidx.at(raw.edges[e].head)] == 0)
                stack.push_back(vidx.at(raw.edges[e].head));
    }
    bool acyclic = static_cast<int>(topo.size()) == nv;
    if (!acyclic) fail(1, "directed cycle detected");

    if (acyclic) {
        // reachability from the source
        std::vector<char> from_src(nv, 0);
        from_src[src] = 1;
        for (int v : topo)
            if (from_src[v])
                for (int e : out[v]) from_src[vidx.at(raw.edges[e].head)] = 1;
        // reaches some terminal
        std::vector<char> to_term(nv, 0);
        for (int t : terms) to_term[t] = 1;
        for (auto it = topo.rbegin(); it != topo.rend(); ++it)
            for (int e : in[*it])
                if (to_term[*it]) to_term[vidx.at(raw.edges[e].tail)] = 1;
        for (int t : terms)
            if (!from_src[t])
                fail(6, "terminal '" + raw.vertices[t] + "' is unreachable from the source");
        for (int v = 0; v < nv; ++v) {
            if (v == src || term_mask[v]) continue;
            if (!from_src[v] || !to_term[v])
                fail(7, "intermediate vertex '" + raw.vertices[v] +
                            "' lies on no source-terminal path");
        }
    }

    if (!errs.empty()) {
        if (violations) *violations = errs;
        return std::nullopt;
    }

    Network n;
    n.name_ = raw.name;
    n.vertex_ids_ = raw.vertices;
    n.vertex_index_ = vidx;
    n.source_ = src;
    n.terminals_ = terms;
    n.terminal_mask_ = term_mask;
    std::sort(n.terminals_.begin(), n.terminals_.end());

    // layers: longest path length from the source
    n.layer_.assign(nv, 0);
    for (int v : topo)
        for (int e : out[v]) {
            int h = vidx.at(raw.edges[e].head);
            n.layer_[h] = std::max(n.layer_[h], n.layer_[v] + 1);
        }
    n.topo_order_ = topo;

    // canonical edge order: layer of tail, then natural id order
    std::vector<int> perm(ne);
    for (int e = 0; e < ne; ++e) perm[e] = e;
    std::sort(perm.begin(), perm.end(), [&](int x, int y) {
        int lx = n.layer_[vidx.at(raw.edges[x].tail)];
        int ly = n.layer_[vidx.at(raw.edges[y].tail)];
        if (lx != ly) return lx < ly;
        return natural_less(raw.edges[x].id, raw.edges[y].id);
    });
    n.edge_ids_.resize(ne);
    n.edge_tail_.resize(ne);
    n.edge_head_.resize(ne);
    n.in_edges_.assign(nv, {});
    n.out_edges_.assign(nv, {});
    for (int r = 0; r < ne; ++r) {
        const auto& e = raw.edges[perm[r]];
        n.edge_ids_[r] = e.id;
        n.edge_tail_[r] = vidx.at(e.tail);
        n.edge_head_[r] = vidx.at(e.head);
        n.edge_index_[e.id] = r;
        n.out_edges_[n.edge_tail_[r]].push_back(r);
        n.in_edges_[n.edge_head_[r]].push_back(r);
    }
    if (violations) violations->clear();
    return n;
}

Network Network::validate_or_throw(const RawNetwork& raw) {
    std::vector<AxiomViolation> errs;
    auto n = validate(raw, &errs);
    if (!n) {
        std::string msg = "invalid network";
        if (!raw.name.empty()) msg += " '" + raw.name + "'";
        for (const auto& e : errs)
            msg += "; axiom " + std::to_string(e.axiom) + ": " + e.message;
        throw std::invalid_argument(msg);
    }
    return *n;
}

int Network::vertex_index(const VertexId& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end())
        throw std::out_of_range("unknown vertex '" + id + "'");
    return it->second;
}

int Network::edge_index(const EdgeId& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end())
        throw std::out_of_range("unknown edge '" + id + "'");
    return it->second;
}

bool Network::is_terminal(int v) const { return terminal_mask_[v] != 0; }

EdgeOrder Network::canonical_edge_order() const {
    EdgeOrder o;
    for (int e = 0; e < edge_count(); ++e) o.rank[edge_ids_[e]] = e + 1;
    return o;
}

int Network::min_cut(int terminal) const {
    if (terminal < 0 || terminal >= vertex_count() || !is_terminal(terminal))
        throw std::invalid_argument("min_cut target is not a terminal");
    // unit-capacity max-flow, BFS augmenting paths on the residual graph
    const int ne = edge_count();
    std::vector<char> used(ne, 0);  // forward edge saturated
    int flow = 0;
    while (true) {
        std::vector<int> pred_edge(vertex_count(), -1);
        std::vector<char> pred_fwd(vertex_count(), 0);
        std::vector<char> seen(vertex_count(), 0);
        std::queue<int> bfs;
        bfs.push(source_);
        seen[source_] = 1;
        bool reached = false;
        while (!bfs.empty() && !reached) {
            int v = bfs.front();
            bfs.pop();
            for (int e : out_edges_[v]) {
                int h = edge_head_[e];
                if (!used[e] && !seen[h]) {
                    seen[h] = 1;
                    pred_edge[h] = e;
                    pred_fwd[h] = 1;
                    if (h == terminal) { reached = true; break; }
                    bfs.push(h);
                }
            }
            if (reached) break;
            for (int e : in_edges_[v]) {
                int t = edge_tail_[e];
                if (used[e] && !seen[t]) {
                    seen[t] = 1;
                    pred_edge[t] = e;
                    pred_fwd[t] = 0;
                    bfs.push(t);
                }
            }
        }
        if (!reached) break;
        for (int v = terminal; v != source_;) {
            int e = pred_edge[v];
            if (pred_fwd[v]) {
                used[e] = 1;
                v = edge_tail_[e];
            } else {
                used[e] = 0;
                v = edge_head_[e];
            }
        }
        ++flow;
    }
    return flow;
}

int Network::mu() const {
    int best = -1;
    for (int t : terminals_) {
        int c = min_cut(t);
        if (best < 0 || c < best) best = c;
    }
    return best;
}

RawNetwork Network::to_raw() const {
    RawNetwork raw;
    raw.name = name_;
    raw.vertices = vertex_ids_;
    for (int e = 0; e < edge_count(); ++e)
        raw.edges.push_back({edge_ids_[e], vertex_ids_[edge_tail_[e]], vertex_ids_[edge_head_[e]]});
    raw.source = vertex_ids_[source_];
    for (int t : terminals_) raw.terminals.push_back(vertex_ids_[t]);
    return raw;
}

Network add_supersource(const Network& n) {
    RawNetwork raw = n.to_raw();
    VertexId super = "S'";
    while (std::count(raw.vertices.begin(), raw.vertices.end(), super)) super += "'";
    raw.vertices.push_back(super);
    int mu = n.mu();
    for (int i = 1; i <= mu; ++i) {
        EdgeId id = "e'" + std::to_string(i);
        while (std::any_of(raw.edges.begin(), raw.edges.end(),
                           [&](const EdgeSpec& e) { return e.id == id; }))
            id += "'";
        raw.edges.push_back({id, super, raw.source});
    }
    raw.source = super;
    if (!raw.name.empty()) raw.name += "+supersource";
    return Network::validate_or_throw(raw);
}

std::set<VertexId> routing_fixable_vertices(const Network& n) {
    std::set<VertexId> result;
    for (int v = 0; v < n.vertex_count(); ++v)
        if (n.is_intermediate(v) && n.in_edges(v).size() == 1)
            result.insert(n.vertex_id(v));
    return result;
}

RawNetwork make_butterfly() {
    RawNetwork raw;
    raw.name = "butterfly";
    raw.vertices = {"S", "V1", "V2", "V3", "V4", "T1", "T2"};
    raw.edges = {{"e1", "S", "V1"},  {"e2", "S", "V2"},  {"e3", "V1", "T1"},
                 {"e4", "V1", "V3"}, {"e5", "V2", "V3"}, {"e6", "V2", "T2"},
                 {"e7", "V3", "V4"}, {"e8", "V4", "T1"}, {"e9", "V4", "T2"}};
    raw.source = "S";
    raw.terminals = {"T1", "T2"};
    return raw;
}

RawNetwork make_combination(int n, int k) {
    if (k < 1 || n < k)
        throw std::invalid_argument("combination network requires n >= k >= 1");
    RawNetwork raw;
    raw.name = "combination:" + std::to_string(n) + "," + std::to_string(k);
    raw.vertices.push_back("S");
    for (int i = 1; i <= n; ++i) raw.vertices.push_back("V" + std::to_string(i));
    int edge = 0;
    for (int i = 1; i <= n; ++i)
        raw.edges.push_back({"e" + std::to_string(++edge), "S", "V" + std::to_string(i)});
    // one terminal per k-subset of {1..n}, subsets in lexicographic order
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = i + 1;
    int t = 0;
    while (true) {
        VertexId term = "T" + std::to_string(++t);
        raw.vertices.push_back(term);
        raw.terminals.push_back(term);
        for (int i : subset)
            raw.edges.push_back({"e" + std::to_string(++edge), "V" + std::to_string(i), term});
        // next k-subset
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - (k - 1 - pos)) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int i = pos + 1; i < k; ++i) subset[i] = subset[i - 1] + 1;
    }
    raw.source = "S";
    return raw;
}

std::string data_dir() {
    if (const char* env = std::getenv("NETCAP_DATA_DIR")) return env;
#ifdef NETCAP_DEFAULT_DATA_DIR
    return NETCAP_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

Network builtin_network(const std::string& name) {
    if (name == "butterfly") return Network::validate_or_throw(make_butterfly());
    if (name == "fig3") return load_network_file(data_dir() + "/fig3.json");
    if (name.rfind("combination:", 0) == 0) {
        auto spec = name.substr(12);
        auto comma = spec.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("expected combination:N,K, got '" + name + "'");
        int n = std::stoi(spec.substr(0, comma));
        int k = std::stoi(spec.substr(comma + 1));
        return Network::validate_or_throw(make_combination(n, k));
    }
    throw std::invalid_argument("unknown builtin network '" + name + "'");
}

std::vector<std::string> builtin_names() {
    return {"butterfly", "combination:N,K", "fig3"};
}

}  // namespace netcap
