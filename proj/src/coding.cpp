#include "netcap/coding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netcap {

std::vector<Symbol> Transcript::restrict_to(const Network&, const std::vector<int>& edges) const {
    std::vector<Symbol> out;
    out.reserve(edges.size());
    for (int e : edges) out.push_back(by_edge[e]);
    return out;
}

void check_code_arities(const Network& n, int q, const NetworkCode& f) {
    for (int v = 0; v < n.vertex_count(); ++v) {
        if (!n.is_intermediate(v)) continue;
        auto it = f.tables.find(n.vertex_id(v));
        if (it == f.tables.end())
            throw std::invalid_argument("network code has no table for vertex '" +
                                        n.vertex_id(v) + "'");
        long rows = ipow(q, static_cast<int>(n.in_edges(v).size()));
        long want = rows * static_cast<long>(n.out_edges(v).size());
        if (static_cast<long>(it->second.size()) != want)
            throw std::invalid_argument("table for vertex '" + n.vertex_id(v) +
                                        "' has size " + std::to_string(it->second.size()) +
                                        ", expected " + std::to_string(want));
        for (Symbol s : it->second)
            if (s >= q)
                throw std::invalid_argument("table for vertex '" + n.vertex_id(v) +
                                            "' contains symbol out of range");
    }
    for (const auto& [vid, tab] : f.tables) {
        int v = n.vertex_index(vid);
        if (!n.is_intermediate(v))
            throw std::invalid_argument("network code assigns a table to non-intermediate vertex '" +
                                        vid + "'");
        (void)tab;
    }
}

namespace {

Transcript propagate(const Network& n, int q,
                     const std::vector<std::vector<int>>& in_sorted,
                     const std::vector<std::vector<int>>& out_sorted,
                     const NetworkCode& f, const std::vector<Symbol>& codeword) {
    if (codeword.size() != out_sorted[n.source()].size())
        throw std::invalid_argument("codeword length " + std::to_string(codeword.size()) +
                                    " does not match |out(S)| = " +
                                    std::to_string(out_sorted[n.source()].size()));
    Transcript tr;
    tr.by_edge.assign(n.edge_count(), 0);
    const auto& src_out = out_sorted[n.source()];
    for (size_t i = 0; i < src_out.size(); ++i) tr.by_edge[src_out[i]] = codeword[i];
    for (int v : n.topo_order()) {
        if (!n.is_intermediate(v)) continue;
        const auto& tab = f.tables.at(n.vertex_id(v));
        long row = 0;
        for (int e : in_sorted[v]) row = row * q + tr.by_edge[e];
        const auto& outs = out_sorted[v];
        for (size_t j = 0; j < outs.size(); ++j)
            tr.by_edge[outs[j]] = tab[row * outs.size() + j];
    }
    return tr;
}

}  // namespace

Transcript transmit(const Network& n, const Alphabet& a, const NetworkCode& f,
                    const std::vector<Symbol>& codeword) {
    check_code_arities(n, a.q(), f);
    std::vector<std::vector<int>> in_sorted(n.vertex_count()), out_sorted(n.vertex_count());
    for (int v = 0; v < n.vertex_count(); ++v) {
        in_sorted[v] = n.in_edges(v);
        out_sorted[v] = n.out_edges(v);
    }
    return propagate(n, a.q(), in_sorted, out_sorted, f, codeword);
}

Transcript transmit_with_order(const Network& n, const Alphabet& a, const EdgeOrder& order,
                               const NetworkCode& f, const std::vector<Symbol>& codeword) {
    for (int e = 0; e < n.edge_count(); ++e)
        if (!order.rank.count(n.edge_id(e)))
            throw std::invalid_argument("edge order misses edge '" + n.edge_id(e) + "'");
    // a legal order extends the path partial order; it is enough to check
    // adjacent edge pairs, since paths are chains of such pairs
    for (int v = 0; v < n.vertex_count(); ++v)
        for (int in : n.in_edges(v))
            for (int out : n.out_edges(v))
                if (order.rank.at(n.edge_id(in)) >= order.rank.at(n.edge_id(out)))
                    throw std::invalid_argument(
                        "edge order violates the path order at '" + n.edge_id(in) +
                        "' -> '" + n.edge_id(out) + "'");
    auto by_rank = [&](int x, int y) {
        return order.rank.at(n.edge_id(x)) < order.rank.at(n.edge_id(y));
    };
    std::vector<std::vector<int>> in_sorted(n.vertex_count()), out_sorted(n.vertex_count());
    for (int v = 0; v < n.vertex_count(); ++v) {
        in_sorted[v] = n.in_edges(v);
        out_sorted[v] = n.out_edges(v);
        std::sort(in_sorted[v].begin(), in_sorted[v].end(), by_rank);
        std::sort(out_sorted[v].begin(), out_sorted[v].end(), by_rank);
    }
    return propagate(n, a.q(), in_sorted, out_sorted, f, codeword);
}

bool is_unambiguous(const Network& n, const Alphabet& a, const OuterCode& code,
                    const NetworkCode& f, AmbiguityWitness* witness) {
    check_code_arities(n, a.q(), f);
    if (code.codewords.empty()) throw std::invalid_argument("outer code is empty");
    std::vector<Transcript> transcripts;
    transcripts.reserve(code.codewords.size());
    for (const auto& c : code.codewords) transcripts.push_back(transmit(n, a, f, c));
    for (int t : n.terminals()) {
        std::map<long, int> seen;
        for (size_t i = 0; i < transcripts.size(); ++i) {
            auto recv = transcripts[i].restrict_to(n, n.in_edges(t));
            long key = tuple_to_index(recv, a.q());
            auto [it, inserted] = seen.emplace(key, static_cast<int>(i));
            if (!inserted) {
                if (witness) {
                    witness->terminal = n.vertex_id(t);
                    witness->codeword_a = it->second;
                    witness->codeword_b = static_cast<int>(i);
                    witness->received = recv;
                }
                return false;
            }
        }
    }
    // hard sanity check: an unambiguous code can never beat the cut bound
    long bound = ipow(a.q(), n.mu());
    if (static_cast<long>(code.codewords.size()) > bound)
        throw std::logic_error("unambiguous code larger than q^mu; internal error");
    return true;
}

bool is_linear(const Network& n, const Alphabet& a, const NetworkCode& f) {
    if (!a.is_field())
        throw std::invalid_argument("linearity is only defined over field alphabets");
    check_code_arities(n, a.q(), f);
    const int q = a.q();
    for (int v = 0; v < n.vertex_count(); ++v) {
        if (!n.is_intermediate(v)) continue;
        const auto& tab = f.tables.at(n.vertex_id(v));
        const int d = static_cast<int>(n.in_edges(v).size());
        const int r = static_cast<int>(n.out_edges(v).size());
        // reconstruct the candidate matrix from unit-vector inputs, then
        // verify the whole table against it
        std::vector<Symbol> mat(static_cast<size_t>(r) * d);
        for (int j = 0; j < d; ++j) {
            std::vector<Symbol> unit(d, 0);
            unit[j] = 1;
            long row = tuple_to_index(unit, q);
            for (int i = 0; i < r; ++i) mat[i * d + j] = tab[row * r + i];
        }
        long rows = ipow(q, d);
        for (long m = 0; m < rows; ++m) {
            auto input = index_to_tuple(m, q, d);
            for (int i = 0; i < r; ++i) {
                Symbol acc = 0;
                for (int j = 0; j < d; ++j) acc = a.add(acc, a.mul(mat[i * d + j], input[j]));
                if (acc != tab[m * r + i]) return false;
            }
        }
    }
    return true;
}

double capacity_value(long code_size, int q) {
    if (code_size < 1) throw std::invalid_argument("code size must be positive");
    return std::log(static_cast<double>(code_size)) / std::log(static_cast<double>(q));
}

std::vector<Symbol> replication_table(const Network& n, int q, int vertex) {
    const int d = static_cast<int>(n.in_edges(vertex).size());
    const int r = static_cast<int>(n.out_edges(vertex).size());
    long rows = ipow(q, d);
    std::vector<Symbol> tab(rows * r);
    for (long m = 0; m < rows; ++m) {
        auto input = index_to_tuple(m, q, d);
        for (int i = 0; i < r; ++i) tab[m * r + i] = input[0];
    }
    return tab;
}

}  // namespace netcap
