#include "netcap/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <climits>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

namespace netcap {

const char* to_string(FeasStatus s) {
    switch (s) {
        case FeasStatus::Feasible: return "feasible";
        case FeasStatus::Infeasible: return "infeasible";
        case FeasStatus::Timeout: return "timeout";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

// Branching restriction used to split the root of the search tree across
// workers. Exactly one of emission/table value is active per task.
struct RootRestriction {
    long emission0 = -1;      // residue class of the first codeword's emission
    long emission_mod = 1;
    int branch_vertex = -1;   // residue class of the first free table choice
    long branch_row = -1;
    long branch_value = -1;
    long branch_mod = 1;      // value taken mod this, capping the task count
};

// Backtracking search over the semantic space: source emissions assigned
// codeword by codeword in increasing order (which removes all codeword
// permutation symmetry), function-table entries (or whole matrices in linear
// mode) branched on demand in propagation order, per-terminal collision
// detection as the pruning rule.
struct Engine {
    const Network& n;
    const Alphabet& a;
    const int M;
    const SearchOptions opts;

    int q;
    int src;
    int src_arity;
    long src_space;
    std::vector<int> proc;  // non-source vertices in topological order
    std::vector<long> in_space, out_space;
    std::vector<int> in_arity, out_arity;
    std::vector<char> routing_fixed;
    std::vector<long> lin_space;  // q^(in*out) per vertex, linear mode

    // edge symbols, one array per codeword level: backtracking into codeword
    // i after exploring codeword i+1 must still see i's propagated symbols
    std::vector<std::vector<Symbol>> symv;
    std::vector<long> emissions;  // per placed codeword
    std::vector<std::vector<long>> entry;    // general mode tables, -1 free
    std::vector<long> matrix_id;             // linear mode, -1 free
    std::vector<std::vector<Symbol>> matrix; // decoded current matrix
    std::vector<std::vector<int>> seen;      // per vertex: tuple -> codeword+1

    std::uint64_t nodes = 0;
    Clock::time_point deadline;
    bool has_deadline = false;
    std::atomic<bool>* stop = nullptr;
    bool timed_out = false;
    bool found = false;
    Certificate result;

    RootRestriction root;
    int lex_rows_vertex = -1;

    int best_prefix = 0;
    Certificate best_prefix_cert;

    Engine(const Network& n_, const Alphabet& a_, int M_, const SearchOptions& o)
        : n(n_), a(a_), M(M_), opts(o) {
        q = a.q();
        src = n.source();
        src_arity = static_cast<int>(n.out_edges(src).size());
        src_space = ipow(q, src_arity);
        if (M < 1 || static_cast<long>(M) > src_space)
            throw std::invalid_argument("code size " + std::to_string(M) +
                                        " out of range [1, q^|out(S)|] = [1, " +
                                        std::to_string(src_space) + "]");
        if (opts.linear_only && !a.is_field())
            throw std::invalid_argument("linear search requires a field alphabet");

        const int nv = n.vertex_count();
        in_space.resize(nv);
        out_space.resize(nv);
        in_arity.resize(nv);
        out_arity.resize(nv);
        routing_fixed.assign(nv, 0);
        lin_space.assign(nv, 0);
        entry.resize(nv);
        matrix_id.assign(nv, -1);
        matrix.resize(nv);
        seen.resize(nv);
        for (int v : n.topo_order()) {
            in_arity[v] = static_cast<int>(n.in_edges(v).size());
            out_arity[v] = static_cast<int>(n.out_edges(v).size());
            in_space[v] = ipow(q, in_arity[v]);
            out_space[v] = ipow(q, out_arity[v]);
            if (v == src) continue;
            proc.push_back(v);
            if (n.is_terminal(v)) {
                seen[v].assign(in_space[v], 0);
            } else {
                if (opts.routing_fix && in_arity[v] == 1) routing_fixed[v] = 1;
                if (opts.linear_only) {
                    lin_space[v] = ipow(q, in_arity[v] * out_arity[v]);
                    matrix[v].assign(static_cast<size_t>(out_arity[v]) * in_arity[v], 0);
                } else {
                    entry[v].assign(in_space[v], -1);
                }
            }
        }
        symv.assign(M, std::vector<Symbol>(n.edge_count(), 0));
        emissions.assign(M, -1);

        // If one vertex receives exactly the source's out-edges and the outer
        // code is the full emission space (forced 0..M-1 in order), permuting
        // that vertex's table rows only relabels codewords, so the row values
        // can be forced strictly increasing. This restores the emission-order
        // symmetry reduction after the supersource transform.
        lex_rows_vertex = -1;
        if (opts.symmetry_break && !opts.linear_only && static_cast<long>(M) == src_space) {
            const auto& souts = n.out_edges(src);
            int head = n.edge_head(souts[0]);
            bool all_same = true;
            for (int e : souts) all_same = all_same && n.edge_head(e) == head;
            if (all_same && !n.is_terminal(head) && !routing_fixed[head] &&
                n.in_edges(head).size() == souts.size())
                lex_rows_vertex = head;
        }
    }

    bool cancelled() {
        if (timed_out) return true;
        if ((nodes & 1023) == 0) {
            if (stop && stop->load(std::memory_order_relaxed)) timed_out = true;
            if (has_deadline && Clock::now() >= deadline) timed_out = true;
        }
        return timed_out;
    }

    void write_outputs_from_matrix(int v, const std::vector<Symbol>& input,
                                   std::vector<Symbol>& sym) {
        const auto& outs = n.out_edges(v);
        const auto& m = matrix[v];
        const int d = in_arity[v];
        for (size_t j = 0; j < outs.size(); ++j) {
            Symbol acc = 0;
            for (int i = 0; i < d; ++i) acc = a.add(acc, a.mul(m[j * d + i], input[i]));
            sym[outs[j]] = acc;
        }
    }

    void decode_matrix(int v, long id) {
        auto& m = matrix[v];
        for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i) {
            m[i] = static_cast<Symbol>(id % q);
            id /= q;
        }
    }

    Certificate snapshot(int codewords) const {
        Certificate c;
        c.q = q;
        c.field = a.is_field();
        for (int i = 0; i < codewords; ++i)
            c.outer_code.codewords.push_back(index_to_tuple(emissions[i], q, src_arity));
        for (int v : proc) {
            if (n.is_terminal(v)) continue;
            const int d = in_arity[v];
            const int r = out_arity[v];
            std::vector<Symbol> tab(in_space[v] * r);
            for (long row = 0; row < in_space[v]; ++row) {
                auto input = index_to_tuple(row, q, d);
                if (opts.linear_only) {
                    if (matrix_id[v] >= 0) {
                        const auto& m = matrix[v];
                        for (int j = 0; j < r; ++j) {
                            Symbol acc = 0;
                            for (int i = 0; i < d; ++i)
                                acc = a.add(acc, a.mul(m[j * d + i], input[i]));
                            tab[row * r + j] = acc;
                        }
                    } else {
                        // unconstrained vertex: complete with replication
                        for (int j = 0; j < r; ++j) tab[row * r + j] = input[0];
                    }
                } else if (entry[v][row] >= 0) {
                    auto out = index_to_tuple(entry[v][row], q, r);
                    for (int j = 0; j < r; ++j) tab[row * r + j] = out[j];
                } else {
                    for (int j = 0; j < r; ++j) tab[row * r + j] = input[0];
                }
            }
            c.network_code.tables[n.vertex_id(v)] = std::move(tab);
        }
        return c;
    }

    void note_prefix(int placed) {
        if (placed > best_prefix) {
            best_prefix = placed;
            best_prefix_cert = snapshot(placed);
        }
    }

    bool place_codeword(int i) {
        note_prefix(i);
        if (i == M) {
            result = snapshot(M);
            found = true;
            return true;
        }
        long start = 0;
        if (i > 0 && opts.symmetry_break) start = emissions[i - 1] + 1;
        long last = src_space - (M - i);  // leave room for the remaining codewords
        if (!opts.symmetry_break && i > 0) last = src_space - 1;
        for (long e = start; e <= last; ++e) {
            if (root.emission0 >= 0 && i == 0 && e % root.emission_mod != root.emission0)
                continue;
            if (!opts.symmetry_break && already_used(e, i)) continue;
            ++nodes;
            if (cancelled()) return false;
            emissions[i] = e;
            auto tuple = index_to_tuple(e, q, src_arity);
            const auto& outs = n.out_edges(src);
            for (size_t j = 0; j < outs.size(); ++j) symv[i][outs[j]] = tuple[j];
            if (propagate(i, 0)) return true;
            emissions[i] = -1;
            if (timed_out) return false;
        }
        return false;
    }

    bool already_used(long e, int placed) const {
        for (int j = 0; j < placed; ++j)
            if (emissions[j] == e) return true;
        return false;
    }

    bool propagate(int i, size_t k) {
        if (k == proc.size()) return place_codeword(i + 1);
        int v = proc[k];
        auto& sym = symv[i];
        long row = 0;
        for (int e : n.in_edges(v)) row = row * q + sym[e];

        if (n.is_terminal(v)) {
            if (seen[v][row] != 0) return false;  // collision with an earlier codeword
            seen[v][row] = i + 1;
            bool ok = propagate(i, k + 1);
            seen[v][row] = 0;
            return ok && !timed_out;
        }

        if (opts.linear_only) {
            if (matrix_id[v] >= 0) {
                write_outputs_from_matrix(v, index_to_tuple(row, q, in_arity[v]), sym);
                return propagate(i, k + 1);
            }
            auto input = index_to_tuple(row, q, in_arity[v]);
            if (routing_fixed[v]) {
                // replication matrix: every output copies the single input
                matrix_id[v] = 0;
                auto& m = matrix[v];
                std::fill(m.begin(), m.end(), 1);  // in_arity == 1
                write_outputs_from_matrix(v, input, sym);
                bool ok = propagate(i, k + 1);
                matrix_id[v] = -1;
                return ok && !timed_out;
            }
            bool restricted = root.branch_vertex == v && i == 0;
            for (long id = 0; id < lin_space[v]; ++id) {
                if (restricted && id % root.branch_mod != root.branch_value) continue;
                ++nodes;
                if (cancelled()) return false;
                matrix_id[v] = id;
                decode_matrix(v, id);
                write_outputs_from_matrix(v, input, sym);
                if (propagate(i, k + 1)) return true;
                matrix_id[v] = -1;
                if (timed_out) return false;
            }
            return false;
        }

        auto& tab = entry[v];
        if (tab[row] >= 0) {
            write_entry_outputs(v, tab[row], sym);
            return propagate(i, k + 1);
        }
        if (routing_fixed[v]) {
            long mp = replication_output(v, row);
            tab[row] = mp;
            write_entry_outputs(v, mp, sym);
            bool ok = propagate(i, k + 1);
            tab[row] = -1;
            return ok && !timed_out;
        }
        bool restricted = root.branch_vertex == v && root.branch_row == row && i == 0;
        long mp_lo = 0;
        long mp_end = out_space[v];
        if (v == lex_rows_vertex) {
            if (row > 0 && tab[row - 1] >= 0) mp_lo = tab[row - 1] + 1;
            mp_end = out_space[v] - (M - 1 - row);  // room for the later rows
        }
        for (long mp = mp_lo; mp < mp_end; ++mp) {
            if (restricted && mp % root.branch_mod != root.branch_value) continue;
            ++nodes;
            if (cancelled()) return false;
            tab[row] = mp;
            write_entry_outputs(v, mp, sym);
            if (propagate(i, k + 1)) return true;
            tab[row] = -1;
            if (timed_out) return false;
        }
        return false;
    }

    void write_entry_outputs(int v, long mp, std::vector<Symbol>& sym) {
        const auto& outs = n.out_edges(v);
        long rest = mp;
        for (int j = static_cast<int>(outs.size()) - 1; j >= 0; --j) {
            sym[outs[j]] = static_cast<Symbol>(rest % q);
            rest /= q;
        }
    }

    // output tuple replicating the (single) input symbol on every out edge
    long replication_output(int v, long row) const {
        long mp = 0;
        for (int j = 0; j < out_arity[v]; ++j) mp = mp * q + row;
        return mp;
    }

    SearchResult run() {
        auto t0 = Clock::now();
        place_codeword(0);
        SearchResult r;
        r.nodes = nodes;
        r.best_prefix_size = best_prefix;
        if (best_prefix > 0) r.best_prefix_certificate = best_prefix_cert;
        if (found) {
            r.status = FeasStatus::Feasible;
            r.certificate = result;
        } else if (timed_out) {
            r.status = FeasStatus::Timeout;
        } else {
            r.status = FeasStatus::Infeasible;
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        return r;
    }
};

SearchResult run_engine(const Network& n, const Alphabet& a, int M, const SearchOptions& opts,
                        const RootRestriction& root, std::atomic<bool>* stop,
                        Clock::time_point deadline, bool has_deadline) {
    Engine e(n, a, M, opts);
    e.root = root;
    e.stop = stop;
    e.deadline = deadline;
    e.has_deadline = has_deadline;
    return e.run();
}

// Root branching alternatives for the parallel split: the first codeword's
// emission candidates when free, otherwise the alternatives of the first
// free table/matrix choice along the forced propagation of codeword 0.
std::vector<RootRestriction> root_tasks(const Network& n, const Alphabet& a, int M,
                                        const SearchOptions& opts) {
    Engine probe(n, a, M, opts);
    std::vector<RootRestriction> tasks;
    long emission_candidates = probe.src_space - (M - 1);
    if (emission_candidates >= 2) {
        long classes =
            std::min<long>(emission_candidates, std::max(256, 16 * opts.threads));
        for (long e = 0; e < classes; ++e) {
            RootRestriction r;
            r.emission0 = e;
            r.emission_mod = classes;
            tasks.push_back(r);
        }
        return tasks;
    }
    // emission forced to 0; walk codeword 0 deterministically to the first
    // free choice
    auto& psym = probe.symv[0];
    auto tuple = index_to_tuple(0, probe.q, probe.src_arity);
    const auto& outs = n.out_edges(probe.src);
    for (size_t j = 0; j < outs.size(); ++j) psym[outs[j]] = tuple[j];
    for (int v : probe.proc) {
        if (n.is_terminal(v)) continue;
        long row = 0;
        for (int e : n.in_edges(v)) row = row * probe.q + psym[e];
        if (probe.routing_fixed[v]) {
            if (opts.linear_only) {
                std::fill(probe.matrix[v].begin(), probe.matrix[v].end(), 1);
                probe.matrix_id[v] = 0;
                probe.write_outputs_from_matrix(v, index_to_tuple(row, probe.q, 1), psym);
            } else {
                probe.write_entry_outputs(v, probe.replication_output(v, row), psym);
            }
            continue;
        }
        long fan = opts.linear_only ? probe.lin_space[v] : probe.out_space[v];
        if (fan >= 2) {
            long classes = std::min<long>(fan, std::max(256, 16 * opts.threads));
            for (long val = 0; val < classes; ++val) {
                RootRestriction r;
                r.emission0 = 0;
                r.branch_vertex = v;
                r.branch_row = opts.linear_only ? -1 : row;
                r.branch_value = val;
                r.branch_mod = classes;
                tasks.push_back(r);
            }
            return tasks;
        }
        // fan-out 1: forced, keep walking
        if (opts.linear_only) {
            probe.matrix_id[v] = 0;
            probe.decode_matrix(v, 0);
            probe.write_outputs_from_matrix(v, index_to_tuple(row, probe.q, probe.in_arity[v]),
                                            psym);
        } else {
            probe.write_entry_outputs(v, 0, psym);
        }
    }
    return tasks;  // empty: nothing to split on
}

}  // namespace

SearchResult decide_feasible_serial(const Network& n, const Alphabet& a, int M,
                                    const SearchOptions& opts) {
    auto deadline = Clock::now();
    bool has_deadline = opts.time_limit_s > 0;
    if (has_deadline)
        deadline += std::chrono::duration_cast<Clock::duration>(
            std::chrono::duration<double>(opts.time_limit_s));
    return run_engine(n, a, M, opts, {}, nullptr, deadline, has_deadline);
}

SearchResult decide_feasible(const Network& n, const Alphabet& a, int M,
                             const SearchOptions& opts) {
    if (opts.threads <= 1) return decide_feasible_serial(n, a, M, opts);

    auto t0 = Clock::now();
    auto deadline = t0;
    bool has_deadline = opts.time_limit_s > 0;
    if (has_deadline)
        deadline += std::chrono::duration_cast<Clock::duration>(
            std::chrono::duration<double>(opts.time_limit_s));

    auto tasks = root_tasks(n, a, M, opts);
    if (tasks.size() < 2) return decide_feasible_serial(n, a, M, opts);

    std::atomic<bool> stop{false};
    std::vector<SearchResult> results(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(opts.threads)
#endif
    for (long i = 0; i < static_cast<long>(tasks.size()); ++i) {
        if (stop.load(std::memory_order_relaxed)) {
            results[i].status = FeasStatus::Infeasible;
            continue;
        }
        results[i] = run_engine(n, a, M, opts, tasks[i], &stop, deadline, has_deadline);
        if (results[i].status == FeasStatus::Feasible)
            stop.store(true, std::memory_order_relaxed);
    }

    SearchResult merged;
    merged.status = FeasStatus::Infeasible;
    bool saw_timeout = false;
    for (auto& r : results) {
        merged.nodes += r.nodes;
        if (r.best_prefix_size > merged.best_prefix_size) {
            merged.best_prefix_size = r.best_prefix_size;
            merged.best_prefix_certificate = r.best_prefix_certificate;
        }
        if (r.status == FeasStatus::Feasible && merged.status != FeasStatus::Feasible) {
            merged.status = FeasStatus::Feasible;
            merged.certificate = r.certificate;
        }
        if (r.status == FeasStatus::Timeout) saw_timeout = true;
    }
    // workers cancelled by a foreign feasible answer report "infeasible" for
    // subtrees they never searched; the stop flag makes that reading safe
    // only because a feasible merge wins outright
    if (merged.status != FeasStatus::Feasible && saw_timeout)
        merged.status = FeasStatus::Timeout;
    merged.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return merged;
}

VerifyReport verify_certificate(const Network& n, const Certificate& cert) {
    VerifyReport rep;
    try {
        if (cert.q < 2) throw std::invalid_argument("alphabet size must be >= 2");
        Alphabet a = Alphabet::make(cert.q, cert.field);
        const auto& code = cert.outer_code.codewords;
        if (code.empty()) throw std::invalid_argument("outer code is empty");
        size_t want = n.out_edges(n.source()).size();
        for (const auto& cw : code)
            if (cw.size() != want)
                throw std::invalid_argument("codeword length " + std::to_string(cw.size()) +
                                            " does not match |out(S)| = " +
                                            std::to_string(want));
        auto sorted = code;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            rep.ok = false;
            rep.detail = "outer code contains duplicate codewords";
            return rep;
        }
        AmbiguityWitness w;
        if (is_unambiguous(n, a, cert.outer_code, cert.network_code, &w)) {
            rep.ok = true;
            rep.detail = "unambiguous: " + std::to_string(code.size()) + " codewords, " +
                         std::to_string(n.terminals().size()) + " terminals checked";
        } else {
            rep.ok = false;
            rep.detail = "ambiguous at terminal '" + w.terminal + "': codewords " +
                         std::to_string(w.codeword_a) + " and " + std::to_string(w.codeword_b) +
                         " are received identically";
        }
    } catch (const std::exception& ex) {
        rep.ok = false;
        rep.detail = std::string("malformed certificate: ") + ex.what();
    }
    return rep;
}

Certificate strip_supersource(const Network& original, const Network& transformed,
                              const Certificate& cert) {
    int mu = original.mu();
    long full = ipow(cert.q, mu);
    if (static_cast<long>(cert.outer_code.codewords.size()) != full)
        throw std::invalid_argument(
            "supersource certificate must carry the full outer code A^mu");
    const VertexId& old_src = original.vertex_id(original.source());
    auto it = cert.network_code.tables.find(old_src);
    if (it == cert.network_code.tables.end())
        throw std::invalid_argument("certificate has no table for the old source '" + old_src +
                                    "'");
    const auto& stab = it->second;
    int old_out = static_cast<int>(original.out_edges(original.source()).size());

    Certificate out;
    out.q = cert.q;
    out.field = cert.field;
    for (const auto& cw : cert.outer_code.codewords) {
        long row = tuple_to_index(cw, cert.q);
        std::vector<Symbol> image(stab.begin() + row * old_out,
                                  stab.begin() + (row + 1) * old_out);
        out.outer_code.codewords.push_back(std::move(image));
    }
    for (const auto& [vid, tab] : cert.network_code.tables)
        if (vid != old_src) out.network_code.tables[vid] = tab;
    (void)transformed;
    return out;
}

namespace {

double binom(long n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / (i + 1);
    return r;
}

CapacityResult capacity_loop(const Network& n, const Alphabet& a, const CapacityOptions& opts,
                             bool linear) {
    auto t0 = Clock::now();
    CapacityResult res;
    const int mu = n.mu();
    long ub_l = ipow(a.q(), mu);
    if (ub_l > INT_MAX) throw std::overflow_error("cut bound exceeds supported code sizes");
    const int ub = static_cast<int>(ub_l);

    const bool super_applicable =
        opts.use_supersource && static_cast<int>(n.out_edges(n.source()).size()) > mu;
    std::optional<Network> transformed;
    if (super_applicable) transformed = add_supersource(n);

    double budget = opts.search.time_limit_s;
    auto remaining = [&]() -> double {
        if (budget <= 0) return 0.0;
        double used = std::chrono::duration<double>(Clock::now() - t0).count();
        return std::max(0.001, budget - used);
    };
    auto out_of_time = [&]() {
        return budget > 0 &&
               std::chrono::duration<double>(Clock::now() - t0).count() >= budget;
    };

    SearchOptions so = opts.search;
    so.linear_only = linear;

    if (opts.lower_bound_only) {
        // grow the code bottom-up: one search at the cut bound, harvesting
        // the deepest consistent prefix as an honest lower bound
        so.time_limit_s = remaining();
        auto r = decide_feasible(n, a, ub, so);
        res.nodes = r.nodes;
        if (r.status == FeasStatus::Feasible) {
            res.status = CapacityResult::Status::Proven;
            res.max_code_size = ub;
            res.lower = res.upper = ub;
            res.certificate = r.certificate;
        } else {
            res.status = CapacityResult::Status::Bounds;
            res.lower = res.max_code_size = std::max(1, r.best_prefix_size);
            res.upper = r.status == FeasStatus::Infeasible ? ub - 1 : ub;
            res.certificate = r.best_prefix_certificate;
        }
        res.capacity = capacity_value(res.max_code_size, a.q());
        res.supersource_used = false;
        res.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        return res;
    }

    int upper = ub;
    bool timeout_seen = false;
    res.lower = 1;  // a singleton code is always unambiguous
    for (int M = ub; M >= 1; --M) {
        bool use_trans = super_applicable && M == ub;
        const Network& target = use_trans ? *transformed : n;
        so.time_limit_s = remaining();
        auto r = decide_feasible(target, a, M, so);
        res.nodes += r.nodes;
        if (r.status == FeasStatus::Feasible) {
            Certificate cert =
                use_trans ? strip_supersource(n, target, *r.certificate) : *r.certificate;
            if (use_trans) res.supersource_used = true;
            res.max_code_size = M;
            res.lower = M;
            res.upper = timeout_seen ? upper : M;
            res.status = timeout_seen ? CapacityResult::Status::Bounds
                                      : CapacityResult::Status::Proven;
            res.certificate = std::move(cert);
            res.capacity = capacity_value(M, a.q());
            res.wall_ms =
                std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            return res;
        }
        if (r.status == FeasStatus::Infeasible) {
            if (use_trans && linear) {
                // the supersource restriction also restricts the old source
                // to a linear map, so a refutation there is not conclusive;
                // redo this size on the original network
                so.time_limit_s = remaining();
                auto r2 = decide_feasible(n, a, M, so);
                res.nodes += r2.nodes;
                if (r2.status == FeasStatus::Feasible) {
                    res.max_code_size = M;
                    res.lower = M;
                    res.upper = timeout_seen ? upper : M;
                    res.status = timeout_seen ? CapacityResult::Status::Bounds
                                              : CapacityResult::Status::Proven;
                    res.certificate = r2.certificate;
                    res.capacity = capacity_value(M, a.q());
                    res.wall_ms =
                        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
                    return res;
                }
                if (r2.status == FeasStatus::Timeout) {
                    timeout_seen = true;
                    if (out_of_time()) break;
                    continue;
                }
            }
            if (!timeout_seen) upper = M - 1;
            continue;
        }
        // timeout at this size: it stays unresolved, keep hunting for a
        // feasible lower bound below; the deepest consistent prefix found is
        // itself a feasible code and tightens the lower bound
        timeout_seen = true;
        if (!use_trans && r.best_prefix_size > res.lower) {
            res.lower = r.best_prefix_size;
            res.certificate = r.best_prefix_certificate;
        }
        if (out_of_time()) break;
    }

    res.status = CapacityResult::Status::Bounds;
    res.max_code_size = res.lower;
    res.upper = upper;
    res.capacity = capacity_value(res.max_code_size, a.q());
    res.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return res;
}

}  // namespace

CapacityResult max_code_size(const Network& n, const Alphabet& a, const CapacityOptions& opts) {
    return capacity_loop(n, a, opts, false);
}

CapacityResult linear_max_code_size(const Network& n, const Alphabet& a,
                                    const CapacityOptions& opts) {
    if (!a.is_field())
        throw std::invalid_argument("linear capacity requires a field alphabet");
    return capacity_loop(n, a, opts, true);
}

SearchResult brute_force_oracle(const Network& n, const Alphabet& a, int M,
                                std::uint64_t max_checks) {
    auto t0 = Clock::now();
    const int q = a.q();
    long src_space = ipow(q, static_cast<int>(n.out_edges(n.source()).size()));
    if (M < 1 || static_cast<long>(M) > src_space)
        throw std::invalid_argument("M out of range [1, q^|out(S)|]");

    std::vector<int> inter;
    for (int v : n.topo_order())
        if (n.is_intermediate(v)) inter.push_back(v);

    double total = binom(src_space, M);
    for (int v : inter) {
        long rows = ipow(q, static_cast<int>(n.in_edges(v).size()));
        long outs = ipow(q, static_cast<int>(n.out_edges(v).size()));
        total *= std::pow(static_cast<double>(outs), static_cast<double>(rows));
        if (total > static_cast<double>(max_checks))
            throw std::invalid_argument("instance too large for the brute-force oracle");
    }
    if (total > static_cast<double>(max_checks))
        throw std::invalid_argument("instance too large for the brute-force oracle");

    // odometer over all function tables
    std::vector<std::vector<long>> rows(n.vertex_count());
    for (int v : inter)
        rows[v].assign(ipow(q, static_cast<int>(n.in_edges(v).size())), 0);

    SearchResult res;
    while (true) {
        NetworkCode f;
        for (int v : inter) {
            int r = static_cast<int>(n.out_edges(v).size());
            std::vector<Symbol> tab(rows[v].size() * r);
            for (size_t row = 0; row < rows[v].size(); ++row) {
                auto out = index_to_tuple(rows[v][row], q, r);
                for (int j = 0; j < r; ++j) tab[row * r + j] = out[j];
            }
            f.tables[n.vertex_id(v)] = std::move(tab);
        }
        // all M-subsets of emissions, lexicographic
        std::vector<long> comb(M);
        for (int i = 0; i < M; ++i) comb[i] = i;
        while (true) {
            ++res.nodes;
            OuterCode code;
            for (long e : comb)
                code.codewords.push_back(
                    index_to_tuple(e, q, static_cast<int>(n.out_edges(n.source()).size())));
            if (is_unambiguous(n, a, code, f)) {
                res.status = FeasStatus::Feasible;
                Certificate cert;
                cert.q = q;
                cert.field = a.is_field();
                cert.outer_code = code;
                cert.network_code = f;
                res.certificate = cert;
                res.wall_ms =
                    std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
                return res;
            }
            int pos = M - 1;
            while (pos >= 0 && comb[pos] == src_space - (M - pos)) --pos;
            if (pos < 0) break;
            ++comb[pos];
            for (int i = pos + 1; i < M; ++i) comb[i] = comb[i - 1] + 1;
        }
        // advance the table odometer
        int vi = static_cast<int>(inter.size()) - 1;
        while (vi >= 0) {
            int v = inter[vi];
            long outs = ipow(q, static_cast<int>(n.out_edges(v).size()));
            size_t row = 0;
            for (; row < rows[v].size(); ++row) {
                if (++rows[v][row] < outs) break;
                rows[v][row] = 0;
            }
            if (row < rows[v].size()) break;
            --vi;
        }
        if (vi < 0) break;
    }
    res.status = FeasStatus::Infeasible;
    res.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return res;
}

std::string CapacityResult::to_json(const std::string& network_name, int q) const {
    nlohmann::json j;
    j["network"] = network_name;
    j["q"] = q;
    j["M_star"] = max_code_size;
    j["capacity"] = capacity;
    j["status"] = status == Status::Proven ? "proven" : "bounds";
    j["lower"] = lower;
    j["upper"] = upper;
    j["nodes"] = nodes;
    j["wall_ms"] = wall_ms;
    j["supersource_used"] = supersource_used;
    return j.dump(2) + "\n";
}

}  // namespace netcap
