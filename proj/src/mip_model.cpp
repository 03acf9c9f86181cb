#include "netcap/mip_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace netcap {

const char* to_string(VarKind k) {
    switch (k) {
        case VarKind::X: return "x";
        case VarKind::Y: return "y";
        case VarKind::Z: return "z";
        case VarKind::W: return "w";
    }
    return "?";
}

const char* to_string(ConstraintTag t) {
    switch (t) {
        case ConstraintTag::C1: return "C1";
        case ConstraintTag::C2: return "C2";
        case ConstraintTag::C3: return "C3";
        case ConstraintTag::C4: return "C4";
        case ConstraintTag::C5: return "C5";
        case ConstraintTag::C6: return "C6";
        case ConstraintTag::C7: return "C7";
        case ConstraintTag::MC: return "MC";
        case ConstraintTag::SYM: return "SYM";
        case ConstraintTag::FIX: return "FIX";
    }
    return "?";
}

namespace {

std::string sanitize(const std::string& id) {
    std::string out;
    for (char ch : id)
        out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') ? ch : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "v" + out;
    return out;
}

struct Builder {
    const Network& n;
    const Alphabet& a;
    int M;
    ModelOptions opts;
    FeasibilityModel model;
    std::map<std::tuple<int, int, int, long, long>, int> index;
    std::map<int, std::string> vertex_token;  // sanitized, collision-free

    Builder(const Network& n_, const Alphabet& a_, int M_, const ModelOptions& o)
        : n(n_), a(a_), M(M_), opts(o) {
        std::map<std::string, int> used;
        for (int v = 0; v < n.vertex_count(); ++v) {
            std::string tok = sanitize(n.vertex_id(v));
            int& count = used[tok];
            if (count++ > 0) tok += "_" + std::to_string(count);
            vertex_token[v] = tok;
        }
    }

    long out_space(int v) const { return ipow(a.q(), static_cast<int>(n.out_edges(v).size())); }
    long in_space(int v) const { return ipow(a.q(), static_cast<int>(n.in_edges(v).size())); }

    int add_var(VarKind kind, int c, int v, long m, long mp) {
        std::ostringstream name;
        name << to_string(kind);
        if (c >= 0) name << "_c" << c;
        name << "_" << vertex_token.at(v);
        if (m >= 0) name << "_i" << m;
        if (mp >= 0) name << "_o" << mp;
        int idx = static_cast<int>(model.variables.size());
        model.variables.push_back({kind, c, v, m, mp, name.str()});
        index[{static_cast<int>(kind), c, v, m, mp}] = idx;
        return idx;
    }

    int var(VarKind kind, int c, int v, long m, long mp) const {
        auto it = index.find({static_cast<int>(kind), c, v, m, mp});
        if (it == index.end()) throw std::logic_error("model variable lookup failed");
        return it->second;
    }

    void add_constraint(std::string name, ConstraintTag tag,
                        std::vector<std::pair<double, int>> terms, Sense sense, double rhs) {
        model.constraints.push_back({std::move(name), tag, std::move(terms), sense, rhs});
    }

    // digit of a big-endian base-q packed tuple at position pos (0-based), arity d
    int digit(long idx, int pos, int d) const {
        long div = 1;
        for (int i = 0; i < d - 1 - pos; ++i) div *= a.q();
        return static_cast<int>((idx / div) % a.q());
    }

    void build() {
        const int q = a.q();
        long out_s = out_space(n.source());
        if (M < 1 || M > out_s)
            throw std::invalid_argument("code size must be between 1 and q^|out(S)| = " +
                                        std::to_string(out_s));
        for (int v = 0; v < n.vertex_count(); ++v) {
            if (!n.is_intermediate(v)) continue;
            long zc = in_space(v) * out_space(v);
            if (zc > opts.max_z_per_vertex)
                throw std::invalid_argument("vertex '" + n.vertex_id(v) + "' needs " +
                                            std::to_string(zc) +
                                            " z-variables, above the configured limit");
        }

        // variables, in a fixed declaration order
        for (int c = 1; c <= M; ++c)
            for (int v = 0; v < n.vertex_count(); ++v) {
                if (n.is_terminal(v)) continue;
                for (long mp = 0; mp < out_space(v); ++mp) add_var(VarKind::X, c, v, -1, mp);
            }
        for (int c = 1; c <= M; ++c)
            for (int v = 0; v < n.vertex_count(); ++v) {
                if (v == n.source()) continue;
                for (long m = 0; m < in_space(v); ++m) add_var(VarKind::Y, c, v, m, -1);
            }
        for (int v = 0; v < n.vertex_count(); ++v) {
            if (!n.is_intermediate(v)) continue;
            for (long m = 0; m < in_space(v); ++m)
                for (long mp = 0; mp < out_space(v); ++mp) add_var(VarKind::Z, -1, v, m, mp);
        }
        for (int c = 1; c <= M; ++c)
            for (int v = 0; v < n.vertex_count(); ++v) {
                if (!n.is_intermediate(v)) continue;
                for (long m = 0; m < in_space(v); ++m)
                    for (long mp = 0; mp < out_space(v); ++mp)
                        add_var(VarKind::W, c, v, m, mp);
            }

        // C1: each non-terminal vertex emits exactly one tuple per codeword
        for (int c = 1; c <= M; ++c)
            for (int v = 0; v < n.vertex_count(); ++v) {
                if (n.is_terminal(v)) continue;
                std::vector<std::pair<double, int>> terms;
                for (long mp = 0; mp < out_space(v); ++mp)
                    terms.push_back({1.0, var(VarKind::X, c, v, -1, mp)});
                add_constraint("C1_c" + std::to_string(c) + "_" + vertex_token[v],
                               ConstraintTag::C1, std::move(terms), Sense::EQ, 1.0);
            }

        // C2: each non-source vertex receives exactly one tuple per codeword
        for (int c = 1; c <= M; ++c)
            for (int v = 0; v < n.vertex_count(); ++v) {
                if (v == n.source()) continue;
                std::vector<std::pair<double, int>> terms;
                for (long m = 0; m < in_space(v); ++m)
                    terms.push_back({1.0, var(VarKind::Y, c, v, m, -1)});
                add_constraint("C2_c" + std::to_string(c) + "_" + vertex_token[v],
                               ConstraintTag::C2, std::move(terms), Sense::EQ, 1.0);
            }

        // C3: the received tuple agrees with the upstream emission on every edge
        for (int c = 1; c <= M; ++c)
            for (int e = 0; e < n.edge_count(); ++e) {
                int u = n.edge_tail(e);
                int v = n.edge_head(e);
                const auto& inv = n.in_edges(v);
                const auto& outu = n.out_edges(u);
                int pos_in = static_cast<int>(std::find(inv.begin(), inv.end(), e) - inv.begin());
                int pos_out =
                    static_cast<int>(std::find(outu.begin(), outu.end(), e) - outu.begin());
                int din = static_cast<int>(inv.size());
                int dout = static_cast<int>(outu.size());
                for (long m = 0; m < in_space(v); ++m) {
                    int me = digit(m, pos_in, din);
                    std::vector<std::pair<double, int>> terms;
                    terms.push_back({1.0, var(VarKind::Y, c, v, m, -1)});
                    for (long mp = 0; mp < out_space(u); ++mp)
                        if (digit(mp, pos_out, dout) != me)
                            terms.push_back({1.0, var(VarKind::X, c, u, -1, mp)});
                    add_constraint("C3_c" + std::to_string(c) + "_" +
                                       sanitize(n.edge_id(e)) + "_i" + std::to_string(m),
                                   ConstraintTag::C3, std::move(terms), Sense::LE, 1.0);
                }
            }

        // C4: the function maps each input to at most one output
        for (int v = 0; v < n.vertex_count(); ++v) {
            if (!n.is_intermediate(v)) continue;
            for (long m = 0; m < in_space(v); ++m) {
                std::vector<std::pair<double, int>> terms;
                for (long mp = 0; mp < out_space(v); ++mp)
                    terms.push_back({1.0, var(VarKind::Z, -1, v, m, mp)});
                add_constraint("C4_" + vertex_token[v] + "_i" + std::to_string(m),
                               ConstraintTag::C4, std::move(terms), Sense::LE, 1.0);
            }
        }

        // C5: received inputs have an image
        for (int c = 1; c <= M; ++c)
            for (int v = 0; v < n.vertex_count(); ++v) {
                if (!n.is_intermediate(v)) continue;
                for (long m = 0; m < in_space(v); ++m) {
                    std::vector<std::pair<double, int>> terms;
                    for (long mp = 0; mp < out_space(v); ++mp)
                        terms.push_back({1.0, var(VarKind::Z, -1, v, m, mp)});
                    terms.push_back({-1.0, var(VarKind::Y, c, v, m, -1)});
                    add_constraint("C5_c" + std::to_string(c) + "_" + vertex_token[v] + "_i" +
                                       std::to_string(m),
                                   ConstraintTag::C5, std::move(terms), Sense::GE, 0.0);
                }
            }

        // C6 with McCormick linearization: sum_m y*z = x becomes
        //   w <= y, w <= z, w >= y + z - 1, and sum_m w = x
        for (int c = 1; c <= M; ++c)
            for (int v = 0; v < n.vertex_count(); ++v) {
                if (!n.is_intermediate(v)) continue;
                for (long m = 0; m < in_space(v); ++m)
                    for (long mp = 0; mp < out_space(v); ++mp) {
                        int w = var(VarKind::W, c, v, m, mp);
                        int y = var(VarKind::Y, c, v, m, -1);
                        int z = var(VarKind::Z, -1, v, m, mp);
                        std::string base = "MC_c" + std::to_string(c) + "_" + vertex_token[v] +
                                           "_i" + std::to_string(m) + "_o" + std::to_string(mp);
                        add_constraint(base + "_a", ConstraintTag::MC,
                                       {{1.0, w}, {-1.0, y}}, Sense::LE, 0.0);
                        add_constraint(base + "_b", ConstraintTag::MC,
                                       {{1.0, w}, {-1.0, z}}, Sense::LE, 0.0);
                        add_constraint(base + "_c", ConstraintTag::MC,
                                       {{1.0, w}, {-1.0, y}, {-1.0, z}}, Sense::GE, -1.0);
                        add_constraint(base + "_d", ConstraintTag::MC, {{1.0, w}},
                                       Sense::GE, 0.0);
                    }
                for (long mp = 0; mp < out_space(v); ++mp) {
                    std::vector<std::pair<double, int>> terms;
                    for (long m = 0; m < in_space(v); ++m)
                        terms.push_back({1.0, var(VarKind::W, c, v, m, mp)});
                    terms.push_back({-1.0, var(VarKind::X, c, v, -1, mp)});
                    add_constraint("C6_c" + std::to_string(c) + "_" + vertex_token[v] + "_o" +
                                       std::to_string(mp),
                                   ConstraintTag::C6, std::move(terms), Sense::EQ, 0.0);
                }
            }

        // C7: every terminal input tuple is claimed by at most one codeword
        for (int v : n.terminals())
            for (long m = 0; m < in_space(v); ++m) {
                std::vector<std::pair<double, int>> terms;
                for (int c = 1; c <= M; ++c)
                    terms.push_back({1.0, var(VarKind::Y, c, v, m, -1)});
                add_constraint("C7_" + vertex_token[v] + "_i" + std::to_string(m),
                               ConstraintTag::C7, std::move(terms), Sense::LE, 1.0);
            }

        if (opts.routing_fix) add_routing_fixings();
        if (opts.symmetry_break) add_symmetry_breaking();
        (void)q;
    }

    // single-input vertices may route: every z entry whose output differs from
    // plain replication of the input symbol is fixed to zero
    void add_routing_fixings() {
        for (int v = 0; v < n.vertex_count(); ++v) {
            if (!n.is_intermediate(v) || n.in_edges(v).size() != 1) continue;
            int dout = static_cast<int>(n.out_edges(v).size());
            for (long m = 0; m < in_space(v); ++m)
                for (long mp = 0; mp < out_space(v); ++mp) {
                    bool replicates = true;
                    for (int j = 0; j < dout && replicates; ++j)
                        if (digit(mp, j, dout) != m) replicates = false;
                    if (replicates) continue;
                    add_constraint("FIX_" + vertex_token[v] + "_i" + std::to_string(m) + "_o" +
                                       std::to_string(mp),
                                   ConstraintTag::FIX,
                                   {{1.0, var(VarKind::Z, -1, v, m, mp)}}, Sense::EQ, 0.0);
                }
        }
    }

    // strict lexicographic order on source emissions, as prefix-sum (column)
    // inequalities over consecutive codeword indicator blocks:
    //   sum_{v <= t} x[c+1] <= sum_{v <= t-1} x[c]   for t = 0 .. N-2
    // i.e. if codeword c+1 emits a value <= t, codeword c emits one <= t-1.
    void add_symmetry_breaking() {
        int s = n.source();
        long nspace = out_space(s);
        for (int c = 1; c < M; ++c)
            for (long t = 0; t + 1 < nspace; ++t) {
                std::vector<std::pair<double, int>> terms;
                for (long mp = 0; mp <= t; ++mp)
                    terms.push_back({1.0, var(VarKind::X, c + 1, s, -1, mp)});
                for (long mp = 0; mp < t; ++mp)
                    terms.push_back({-1.0, var(VarKind::X, c, s, -1, mp)});
                add_constraint("SYM_c" + std::to_string(c) + "_t" + std::to_string(t),
                               ConstraintTag::SYM, std::move(terms), Sense::LE, 0.0);
            }
    }
};

std::string format_coeff(double coeff, const std::string& name) {
    std::ostringstream out;
    double mag = std::abs(coeff);
    out << (coeff < 0 ? "- " : "+ ");
    if (mag != 1.0) out << mag << " ";
    out << name;
    return out.str();
}

}  // namespace

FeasibilityModel build_model(const Network& n, const Alphabet& a, int code_size,
                             const ModelOptions& opts) {
    Builder b(n, a, code_size, opts);
    b.model.network_name = n.name().empty() ? "network" : n.name();
    b.model.q = a.q();
    b.model.code_size = code_size;
    b.model.options = opts;
    b.build();
    for (const auto& [v, tok] : b.vertex_token) b.model.vertex_name_map[n.vertex_id(v)] = tok;
    return std::move(b.model);
}

int FeasibilityModel::find_variable(VarKind kind, int codeword, int vertex, long in_tuple,
                                    long out_tuple) const {
    for (size_t i = 0; i < variables.size(); ++i) {
        const auto& v = variables[i];
        if (v.kind == kind && v.codeword == codeword && v.vertex == vertex &&
            v.in_tuple == in_tuple && v.out_tuple == out_tuple)
            return static_cast<int>(i);
    }
    return -1;
}

ModelStats FeasibilityModel::stats() const {
    ModelStats s;
    for (const char* k : {"x", "y", "z", "w"}) s.variables_by_kind[k] = 0;
    for (const auto& v : variables) s.variables_by_kind[to_string(v.kind)]++;
    for (const auto& c : constraints) s.constraints_by_tag[to_string(c.tag)]++;
    return s;
}

std::string FeasibilityModel::export_lp() const {
    std::ostringstream out;
    out << "\\ feasibility model: network=" << network_name << " q=" << q
        << " M=" << code_size << "\n";
    out << "\\ options: routing_fix=" << (options.routing_fix ? 1 : 0)
        << " symmetry_break=" << (options.symmetry_break ? 1 : 0) << "\n";
    out << "Minimize\n obj: 0 " << variables.front().name << "\n";
    out << "Subject To\n";
    for (const auto& c : constraints) {
        out << " " << c.name << ":";
        int on_line = 0;
        for (const auto& [coeff, vi] : c.terms) {
            if (on_line == 8) {
                out << "\n   ";
                on_line = 0;
            }
            out << " " << format_coeff(coeff, variables[vi].name);
            ++on_line;
        }
        out << (c.sense == Sense::LE ? " <= " : c.sense == Sense::GE ? " >= " : " = ");
        out << c.rhs << "\n";
    }
    out << "Binaries\n";
    int on_line = 0;
    for (const auto& v : variables) {
        out << " " << v.name;
        if (++on_line == 8) {
            out << "\n";
            on_line = 0;
        }
    }
    if (on_line) out << "\n";
    out << "End\n";
    for (const auto& [id, tok] : vertex_name_map)
        if (id != tok) out << "\\ vertex name mapping: " << id << " -> " << tok << "\n";
    return out.str();
}

std::string FeasibilityModel::export_mps() const {
    std::ostringstream out;
    out << "NAME          " << canonical_file_name("") << "\n";
    out << "ROWS\n";
    out << " N  obj\n";
    for (const auto& c : constraints) {
        char sense = c.sense == Sense::LE ? 'L' : c.sense == Sense::GE ? 'G' : 'E';
        out << " " << sense << "  " << c.name << "\n";
    }
    // column-major entries
    std::vector<std::vector<std::pair<std::string, double>>> cols(variables.size());
    for (const auto& c : constraints)
        for (const auto& [coeff, vi] : c.terms) cols[vi].push_back({c.name, coeff});
    out << "COLUMNS\n";
    out << "    MARKER                 'MARKER'                 'INTORG'\n";
    for (size_t vi = 0; vi < variables.size(); ++vi) {
        const auto& entries = cols[vi];
        if (entries.empty()) {
            out << "    " << variables[vi].name << "  obj  0\n";
            continue;
        }
        for (size_t i = 0; i < entries.size(); i += 2) {
            out << "    " << variables[vi].name << "  " << entries[i].first << "  "
                << entries[i].second;
            if (i + 1 < entries.size())
                out << "  " << entries[i + 1].first << "  " << entries[i + 1].second;
            out << "\n";
        }
    }
    out << "    MARKER                 'MARKER'                 'INTEND'\n";
    out << "RHS\n";
    for (const auto& c : constraints)
        if (c.rhs != 0.0) out << "    RHS  " << c.name << "  " << c.rhs << "\n";
    out << "BOUNDS\n";
    for (const auto& v : variables) out << " BV BND  " << v.name << "\n";
    out << "ENDATA\n";
    return out.str();
}

std::string FeasibilityModel::canonical_file_name(const std::string& extension) const {
    std::string name = sanitize(network_name);
    name += "_q" + std::to_string(q) + "_M" + std::to_string(code_size);
    if (options.routing_fix) name += "_rf";
    if (options.symmetry_break) name += "_sym";
    if (!extension.empty()) name += "." + extension;
    return name;
}

std::string FeasibilityModel::metadata_json() const {
    nlohmann::json j;
    j["network"] = network_name;
    j["q"] = q;
    j["M"] = code_size;
    j["options"] = {{"routing_fix", options.routing_fix},
                    {"symmetry_break", options.symmetry_break}};
    auto s = stats();
    j["variables"] = s.variables_by_kind;
    j["constraints"] = s.constraints_by_tag;
    j["vertex_name_map"] = vertex_name_map;
    return j.dump(2) + "\n";
}

}  // namespace netcap
