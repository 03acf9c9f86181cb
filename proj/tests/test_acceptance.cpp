#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "netcap/coding.hpp"
#include "netcap/json_io.hpp"
#include "netcap/mip_model.hpp"
#include "netcap/network.hpp"
#include "netcap/search.hpp"

using namespace netcap;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// every capacity claim must respect the cut bound q^mu
void check_cut_bound(const Network& n, int q, const CapacityResult& r) {
    long bound = ipow(q, n.mu());
    CHECK(r.max_code_size <= bound);
    CHECK(r.upper <= bound);
    CHECK(r.lower <= r.upper);
}

int hw_threads() { return 8; }

RawNetwork random_tiny(std::mt19937& rng) {
    RawNetwork raw;
    raw.name = "tiny";
    std::uniform_int_distribution<int> coin(0, 1);
    int shape = std::uniform_int_distribution<int>(0, 5)(rng);
    auto E = [&raw, e = 0](const VertexId& a, const VertexId& b) mutable {
        raw.edges.push_back({"e" + std::to_string(++e), a, b});
    };
    raw.source = "S";
    switch (shape) {
        case 0:
            raw.vertices = {"S", "V", "T"};
            raw.terminals = {"T"};
            E("S", "V");
            E("V", "T");
            if (coin(rng)) E("V", "T");
            break;
        case 1:
            raw.vertices = {"S", "V", "T1", "T2"};
            raw.terminals = {"T1", "T2"};
            E("S", "V");
            E("V", "T1");
            E("V", "T2");
            break;
        case 2:
            raw.vertices = {"S", "V", "T"};
            raw.terminals = {"T"};
            E("S", "V");
            E("S", "V");
            E("V", "T");
            if (coin(rng)) E("V", "T");
            break;
        case 3:
            raw.vertices = {"S", "V", "T"};
            raw.terminals = {"T"};
            E("S", "T");
            E("S", "V");
            E("V", "T");
            break;
        case 4:
            raw.vertices = {"S", "V", "W", "T"};
            raw.terminals = {"T"};
            E("S", "V");
            E("V", "W");
            E("W", "T");
            if (coin(rng)) E("S", "W");
            break;
        default:
            raw.vertices = {"S", "V", "W", "T"};
            raw.terminals = {"T"};
            E("S", "V");
            E("S", "V");
            E("V", "W");
            E("W", "T");
            if (coin(rng)) E("W", "T");
            break;
    }
    return raw;
}

double oracle_cost(const Network& n, int q, int M) {
    double total = 1;
    for (int v = 0; v < n.vertex_count(); ++v)
        if (n.is_intermediate(v))
            total *= std::pow(
                static_cast<double>(ipow(q, static_cast<int>(n.out_edges(v).size()))),
                static_cast<double>(ipow(q, static_cast<int>(n.in_edges(v).size()))));
    for (int i = 0; i < M; ++i)
        total *= ipow(q, static_cast<int>(n.out_edges(n.source()).size()));
    return total;
}

// ---- independent model-solution enumeration (free choices: emissions + z) --

using VarIndex = std::map<std::tuple<int, int, int, long, long>, int>;

VarIndex index_variables(const FeasibilityModel& m) {
    VarIndex idx;
    for (size_t i = 0; i < m.variables.size(); ++i) {
        const auto& v = m.variables[i];
        idx[{static_cast<int>(v.kind), v.codeword, v.vertex, v.in_tuple, v.out_tuple}] =
            static_cast<int>(i);
    }
    return idx;
}

int at(const VarIndex& idx, VarKind k, int c, int v, long m, long mp) {
    return idx.at({static_cast<int>(k), c, v, m, mp});
}

bool satisfies_all(const FeasibilityModel& m, const std::vector<char>& assign) {
    for (const auto& c : m.constraints) {
        double lhs = 0;
        for (const auto& [coeff, vi] : c.terms) lhs += coeff * assign[vi];
        bool ok = c.sense == Sense::LE   ? lhs <= c.rhs + 1e-9
                  : c.sense == Sense::GE ? lhs >= c.rhs - 1e-9
                                         : std::abs(lhs - c.rhs) < 1e-9;
        if (!ok) return false;
    }
    return true;
}

std::vector<char> derive_assignment(const FeasibilityModel& model, const Network& n, int q,
                                    const VarIndex& idx, const std::vector<long>& emissions,
                                    const std::map<int, std::vector<long>>& ztab) {
    std::vector<char> assign(model.variables.size(), 0);
    const int M = static_cast<int>(emissions.size());
    for (const auto& [v, rows] : ztab)
        for (size_t m = 0; m < rows.size(); ++m)
            if (rows[m] >= 0) assign[at(idx, VarKind::Z, -1, v, m, rows[m])] = 1;
    for (int c = 1; c <= M; ++c) {
        std::vector<Symbol> sym(n.edge_count(), 0);
        auto emit = index_to_tuple(emissions[c - 1], q,
                                   static_cast<int>(n.out_edges(n.source()).size()));
        const auto& souts = n.out_edges(n.source());
        for (size_t j = 0; j < souts.size(); ++j) sym[souts[j]] = emit[j];
        assign[at(idx, VarKind::X, c, n.source(), -1, emissions[c - 1])] = 1;
        for (int v : n.topo_order()) {
            if (v == n.source()) continue;
            long m = 0;
            for (int e : n.in_edges(v)) m = m * q + sym[e];
            assign[at(idx, VarKind::Y, c, v, m, -1)] = 1;
            if (!n.is_intermediate(v)) continue;
            long mp = ztab.at(v)[m];
            if (mp < 0) continue;  // x block stays all zero; C1 rejects
            assign[at(idx, VarKind::W, c, v, m, mp)] = 1;
            assign[at(idx, VarKind::X, c, v, -1, mp)] = 1;
            auto out = index_to_tuple(mp, q, static_cast<int>(n.out_edges(v).size()));
            const auto& outs = n.out_edges(v);
            for (size_t j = 0; j < outs.size(); ++j) sym[outs[j]] = out[j];
        }
    }
    return assign;
}

bool model_feasible_by_enumeration(const FeasibilityModel& model, const Network& n,
                                   const Alphabet& a, int M) {
    const int q = a.q();
    VarIndex idx = index_variables(model);
    long nspace = ipow(q, static_cast<int>(n.out_edges(n.source()).size()));
    std::vector<int> inter;
    for (int v : n.topo_order())
        if (n.is_intermediate(v)) inter.push_back(v);
    std::map<int, std::vector<long>> ztab;
    for (int v : inter)
        ztab[v] =
            std::vector<long>(ipow(q, static_cast<int>(n.in_edges(v).size())), -1);

    std::vector<long> emissions(M, 0);
    while (true) {
        for (auto& [v, rows] : ztab) std::fill(rows.begin(), rows.end(), -1);
        while (true) {
            auto assign = derive_assignment(model, n, q, idx, emissions, ztab);
            if (satisfies_all(model, assign)) return true;
            size_t vi = 0;
            for (; vi < inter.size(); ++vi) {
                auto& rows = ztab[inter[vi]];
                long outs = ipow(q, static_cast<int>(n.out_edges(inter[vi]).size()));
                size_t r = 0;
                for (; r < rows.size(); ++r) {
                    if (++rows[r] < outs) break;
                    rows[r] = -1;
                }
                if (r < rows.size()) break;
            }
            if (vi == inter.size()) break;
        }
        int c = M - 1;
        while (c >= 0 && ++emissions[c] == nspace) emissions[c--] = 0;
        if (c < 0) break;
    }
    return false;
}

// ---- independent LP-format grammar check --------------------------------

struct LpToken {
    enum Kind { Ident, Number, Plus, Minus, Colon, Le, Ge, Eq } kind;
    std::string text;
};

std::vector<LpToken> lp_tokenize(const std::string& text) {
    std::vector<LpToken> toks;
    size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            toks.push_back({LpToken::Ident, text.substr(i, j - i)});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            size_t j = i;
            while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '.' || text[j] == 'e' || text[j] == 'E'))
                ++j;
            toks.push_back({LpToken::Number, text.substr(i, j - i)});
            i = j;
        } else if (ch == '+') {
            toks.push_back({LpToken::Plus, "+"});
            ++i;
        } else if (ch == '-') {
            toks.push_back({LpToken::Minus, "-"});
            ++i;
        } else if (ch == ':') {
            toks.push_back({LpToken::Colon, ":"});
            ++i;
        } else if (ch == '<' && i + 1 < text.size() && text[i + 1] == '=') {
            toks.push_back({LpToken::Le, "<="});
            i += 2;
        } else if (ch == '>' && i + 1 < text.size() && text[i + 1] == '=') {
            toks.push_back({LpToken::Ge, ">="});
            i += 2;
        } else if (ch == '=') {
            toks.push_back({LpToken::Eq, "="});
            ++i;
        } else {
            FAIL("LP grammar: unexpected character '" << ch << "'");
            ++i;
        }
    }
    return toks;
}

struct LpSummary {
    std::set<std::string> constraint_names;
    std::map<std::string, long> constraints_by_tag;
    std::set<std::string> variables_used;
    std::set<std::string> binaries;
};

// Parses the exported LP text from scratch: section structure, objective,
// constraint grammar NAME ':' (('+'|'-') [NUM] IDENT)+ SENSE NUM, binaries
// list, 'End'. Shares nothing with the exporter.
LpSummary lp_parse(const std::string& text) {
    // split into sections by keyword lines; drop comment lines
    std::vector<std::string> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line[0] != '\\') lines.push_back(line);
        start = end + 1;
    }
    REQUIRE(lines.size() > 4);
    REQUIRE(lines[0] == "Minimize");
    REQUIRE(lines[1].substr(0, 5) == " obj:");
    REQUIRE(lines[2] == "Subject To");

    size_t bin_at = 0, end_at = 0;
    for (size_t i = 3; i < lines.size(); ++i) {
        if (lines[i] == "Binaries") bin_at = i;
        if (lines[i] == "End") end_at = i;
    }
    REQUIRE(bin_at > 0);
    REQUIRE(end_at > bin_at);

    std::string body;
    for (size_t i = 3; i < bin_at; ++i) body += lines[i] + "\n";
    auto toks = lp_tokenize(body);

    LpSummary s;
    size_t i = 0;
    while (i < toks.size()) {
        REQUIRE(toks[i].kind == LpToken::Ident);  // constraint name
        std::string name = toks[i].text;
        CHECK(s.constraint_names.insert(name).second);  // unique
        s.constraints_by_tag[name.substr(0, name.find('_'))]++;
        ++i;
        REQUIRE(toks[i].kind == LpToken::Colon);
        ++i;
        int terms = 0;
        while (i < toks.size() &&
               (toks[i].kind == LpToken::Plus || toks[i].kind == LpToken::Minus)) {
            ++i;
            if (toks[i].kind == LpToken::Number) ++i;  // optional magnitude
            REQUIRE(toks[i].kind == LpToken::Ident);
            s.variables_used.insert(toks[i].text);
            ++i;
            ++terms;
        }
        REQUIRE(terms > 0);
        REQUIRE((toks[i].kind == LpToken::Le || toks[i].kind == LpToken::Ge ||
                 toks[i].kind == LpToken::Eq));
        ++i;
        if (toks[i].kind == LpToken::Minus) ++i;  // negative rhs
        REQUIRE(toks[i].kind == LpToken::Number);
        ++i;
    }

    for (size_t li = bin_at + 1; li < end_at; ++li)
        for (const auto& t : lp_tokenize(lines[li])) {
            REQUIRE(t.kind == LpToken::Ident);
            CHECK(s.binaries.insert(t.text).second);
        }
    return s;
}

// fig:riis linear network codes from the explicit construction: V1, V2 and the
// bottleneck followers replicate; V3, V4 apply the stated linear forms
Certificate fig3_linear_certificate(const Network& n, const Alphabet& a, Symbol c3a,
                                    Symbol c3b, Symbol c4c, Symbol c4d) {
    const int q = a.q();
    Certificate cert;
    cert.q = q;
    cert.field = true;
    for (long i = 0; i < ipow(q, 2); ++i)
        cert.outer_code.codewords.push_back(index_to_tuple(i, q, 2));
    for (const char* vtx : {"V1", "V2", "W3", "W4"})
        cert.network_code.tables[vtx] = replication_table(n, q, n.vertex_index(vtx));
    std::vector<Symbol> v3, v4;
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y) {
            v3.push_back(a.add(a.mul(c3a, x), a.mul(c3b, y)));
            v4.push_back(a.add(a.mul(c4c, x), a.mul(c4d, y)));
        }
    cert.network_code.tables["V3"] = v3;
    cert.network_code.tables["V4"] = v4;
    return cert;
}

}  // namespace

TEST_CASE("acceptance 1: butterfly over F_3 has a proven optimum of 9") {
    auto t0 = std::chrono::steady_clock::now();
    Network n = builtin_network("butterfly");
    Alphabet f3 = Alphabet::field(3);
    CapacityOptions opts;
    opts.search.threads = hw_threads();
    CapacityResult r = max_code_size(n, f3, opts);
    CHECK(r.status == CapacityResult::Status::Proven);
    CHECK(r.max_code_size == 9);
    CHECK(r.capacity == doctest::Approx(2.0));
    check_cut_bound(n, 3, r);
    REQUIRE(r.certificate.has_value());
    CHECK(verify_certificate(n, *r.certificate).ok);

    // the shipped explicit construction verifies, and its channel map sends
    // codeword (1,2) to (2,0) at the first terminal
    Certificate cert = load_certificate_file(data_dir() + "/example1.cert.json");
    auto rep = verify_certificate(n, cert);
    CHECK_MESSAGE(rep.ok, rep.detail);
    Transcript tr = transmit(n, f3, cert.network_code, {1, 2});
    CHECK(tr.restrict_to(n, n.in_edges(n.vertex_index("T1"))) ==
          std::vector<Symbol>{2, 0});
    CHECK(seconds_since(t0) < 10.0);
}

TEST_CASE("acceptance 2: butterfly over F_2 has a proven optimum of 4") {
    auto t0 = std::chrono::steady_clock::now();
    Network n = builtin_network("butterfly");
    CapacityResult r = max_code_size(n, Alphabet::field(2));
    CHECK(r.status == CapacityResult::Status::Proven);
    CHECK(r.max_code_size == 4);
    check_cut_bound(n, 2, r);
    REQUIRE(r.certificate.has_value());
    CHECK(verify_certificate(n, *r.certificate).ok);
    // cross-check against the exhaustive oracle
    CHECK(brute_force_oracle(n, Alphabet::field(2), 4).status == FeasStatus::Feasible);
    CHECK(seconds_since(t0) < 10.0);
}

TEST_CASE("acceptance 3: (5,2) combination network over F_2 caps at 2") {
    auto t0 = std::chrono::steady_clock::now();
    Network n = builtin_network("combination:5,2");
    CapacityOptions opts;
    opts.search.threads = hw_threads();
    CapacityResult r = max_code_size(n, Alphabet::field(2), opts);
    CHECK(r.status == CapacityResult::Status::Proven);
    CHECK(r.max_code_size == 2);
    CHECK(r.capacity == doctest::Approx(1.0));
    check_cut_bound(n, 2, r);
    REQUIRE(r.certificate.has_value());
    CHECK(verify_certificate(n, *r.certificate).ok);
    CHECK(seconds_since(t0) < 1800.0);
}

TEST_CASE("acceptance 4: (5,2) combination network over F_3 caps at 6") {
    auto t0 = std::chrono::steady_clock::now();
    Network n = builtin_network("combination:5,2");
    CapacityOptions opts;
    opts.search.threads = hw_threads();
    CapacityResult r = max_code_size(n, Alphabet::field(3), opts);
    // full proof includes infeasibility at M = 7
    CHECK(r.status == CapacityResult::Status::Proven);
    CHECK(r.max_code_size == 6);
    CHECK(r.capacity == doctest::Approx(std::log(6.0) / std::log(3.0)));
    check_cut_bound(n, 3, r);
    REQUIRE(r.certificate.has_value());
    CHECK(verify_certificate(n, *r.certificate).ok);
    CHECK(seconds_since(t0) < 1800.0);
}

TEST_CASE("acceptance 5: (5,2) combination network linear capacities") {
    auto t0 = std::chrono::steady_clock::now();
    Network n = builtin_network("combination:5,2");
    CapacityOptions opts;
    opts.search.threads = hw_threads();

    CapacityResult r2 = linear_max_code_size(n, Alphabet::field(2), opts);
    CHECK(r2.status == CapacityResult::Status::Proven);
    CHECK(r2.max_code_size == 2);
    CHECK(r2.capacity == doctest::Approx(1.0));

    CapacityResult r4 = linear_max_code_size(n, Alphabet::field(4), opts);
    CHECK(r4.status == CapacityResult::Status::Proven);
    CHECK(r4.max_code_size == 16);
    CHECK(r4.capacity == doctest::Approx(2.0));
    check_cut_bound(n, 4, r4);
    REQUIRE(r4.certificate.has_value());
    Alphabet f4 = Alphabet::field(4);
    CHECK(is_linear(n, f4, r4.certificate->network_code));
    CHECK(verify_certificate(n, *r4.certificate).ok);
    CHECK(seconds_since(t0) < 1800.0);
}

TEST_CASE("acceptance 6: five-terminal double-unicast grid (fig3)") {
    auto t0 = std::chrono::steady_clock::now();
    Network n = builtin_network("fig3");

    CapacityResult r2 = max_code_size(n, Alphabet::field(2));
    CHECK(r2.status == CapacityResult::Status::Proven);
    CHECK(r2.max_code_size == 2);
    check_cut_bound(n, 2, r2);

    // explicit linear constructions achieve capacity 2 over F_3 and F_4:
    //   F_3: V3 = a + 2b, V4 = c + d
    //   F_4: V3 = alpha a + b, V4 = (alpha+1) c + d  (alpha generates F_4)
    Alphabet f3 = Alphabet::field(3);
    Certificate c3 = fig3_linear_certificate(n, f3, 1, 2, 1, 1);
    REQUIRE(is_linear(n, f3, c3.network_code));
    auto rep3 = verify_certificate(n, c3);
    CHECK_MESSAGE(rep3.ok, rep3.detail);
    CHECK(c3.outer_code.codewords.size() == 9);

    Alphabet f4 = Alphabet::field(4);
    Certificate c4 = fig3_linear_certificate(n, f4, 2, 1, 3, 1);
    REQUIRE(is_linear(n, f4, c4.network_code));
    auto rep4 = verify_certificate(n, c4);
    CHECK_MESSAGE(rep4.ok, rep4.detail);
    CHECK(c4.outer_code.codewords.size() == 16);

    // and the searcher proves these sizes optimal
    CapacityOptions opts;
    opts.search.threads = hw_threads();
    CapacityResult l3 = linear_max_code_size(n, f3, opts);
    CHECK(l3.status == CapacityResult::Status::Proven);
    CHECK(l3.max_code_size == 9);
    CapacityResult l4 = linear_max_code_size(n, f4, opts);
    CHECK(l4.status == CapacityResult::Status::Proven);
    CHECK(l4.max_code_size == 16);
    CHECK(seconds_since(t0) < 1800.0);
}

TEST_CASE("acceptance 7: six-symbol alphabet on fig3 - verify fast, bound honestly") {
    Network n = builtin_network("fig3");

    // (a) an externally supplied size-34 certificate verifies in well under 1 s
    auto t0 = std::chrono::steady_clock::now();
    Certificate cert = load_certificate_file(data_dir() + "/fig3_q6_M34.cert.json");
    REQUIRE(cert.outer_code.codewords.size() == 34);
    auto rep = verify_certificate(n, cert);
    CHECK_MESSAGE(rep.ok, rep.detail);
    CHECK(seconds_since(t0) < 1.0);

    // (b) best-effort lower-bound mode reaches at least 25 within the budget
    CapacityOptions opts;
    opts.lower_bound_only = true;
    opts.search.threads = hw_threads();
    opts.search.time_limit_s = 120.0;
    auto t1 = std::chrono::steady_clock::now();
    CapacityResult r = max_code_size(n, Alphabet::plain(6), opts);
    CHECK(seconds_since(t1) < 3600.0);
    CHECK(r.lower >= 25);
    check_cut_bound(n, 6, r);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->outer_code.codewords.size() == static_cast<size_t>(r.lower));
    auto rep2 = verify_certificate(n, *r.certificate);
    CHECK_MESSAGE(rep2.ok, rep2.detail);
}

TEST_CASE("acceptance 8: property suites") {
    auto t0 = std::chrono::steady_clock::now();

    // McCormick exactness, exhaustively per product group
    {
        RawNetwork raw;
        raw.vertices = {"S", "V", "T"};
        raw.edges = {{"e1", "S", "V"}, {"e2", "V", "T"}};
        raw.source = "S";
        raw.terminals = {"T"};
        Network n = Network::validate_or_throw(raw);
        FeasibilityModel m = build_model(n, Alphabet::field(2), 1);
        VarIndex idx = index_variables(m);
        int v = n.vertex_index("V");
        for (long mm = 0; mm < 2; ++mm)
            for (long mp = 0; mp < 2; ++mp) {
                int wi = at(idx, VarKind::W, 1, v, mm, mp);
                int yi = at(idx, VarKind::Y, 1, v, mm, -1);
                int zi = at(idx, VarKind::Z, -1, v, mm, mp);
                for (int y = 0; y <= 1; ++y)
                    for (int z = 0; z <= 1; ++z)
                        for (int w = 0; w <= 1; ++w) {
                            std::vector<char> assign(m.variables.size(), 0);
                            assign[wi] = static_cast<char>(w);
                            assign[yi] = static_cast<char>(y);
                            assign[zi] = static_cast<char>(z);
                            bool ok = true;
                            for (const auto& c : m.constraints) {
                                if (c.tag != ConstraintTag::MC) continue;
                                bool touches = false;
                                for (const auto& [co, vi] : c.terms) touches |= vi == wi;
                                if (!touches) continue;
                                double lhs = 0;
                                for (const auto& [co, vi] : c.terms) lhs += co * assign[vi];
                                ok &= c.sense == Sense::LE ? lhs <= c.rhs : lhs >= c.rhs;
                            }
                            CHECK(ok == (w == y * z));
                        }
            }
    }

    // model <-> semantics and engine <-> oracle agreement, plus the routing
    // equivalence (Prop 2 analogue): >= 200 random oracle-scale instances each
    {
        std::mt19937 rng(99);
        int model_done = 0, engine_done = 0;
        while (model_done < 200 || engine_done < 200) {
            Network n = Network::validate_or_throw(random_tiny(rng));
            int q = std::uniform_int_distribution<int>(2, 3)(rng);
            long nspace = ipow(q, static_cast<int>(n.out_edges(n.source()).size()));
            int M = std::uniform_int_distribution<int>(engine_done % 4 == 0 ? 1 : 2, 4)(rng);
            if (M > nspace) M = static_cast<int>(nspace);
            double cost = oracle_cost(n, q, M);
            if (cost > 300000) continue;
            Alphabet a = Alphabet::field(q);
            bool semantic = brute_force_oracle(n, a, M).status == FeasStatus::Feasible;

            if (engine_done < 200) {
                SearchOptions with, without;
                without.routing_fix = false;
                CHECK((decide_feasible(n, a, M, with).status == FeasStatus::Feasible) ==
                      semantic);
                CHECK((decide_feasible(n, a, M, without).status == FeasStatus::Feasible) ==
                      semantic);
                ++engine_done;
            }
            if (model_done < 200 && cost <= 120000) {
                CHECK(model_feasible_by_enumeration(build_model(n, a, M), n, a, M) ==
                      semantic);
                ++model_done;
            }
        }
    }

    // Prop 1 analogue: the supersource transform preserves mu
    {
        std::mt19937 rng(7);
        for (int it = 0; it < 60; ++it) {
            Network n = Network::validate_or_throw(random_tiny(rng));
            Network t = add_supersource(n);
            CHECK(t.mu() == n.mu());
            CHECK(t.out_edges(t.source()).size() == static_cast<size_t>(n.mu()));
        }
        for (const char* name : {"butterfly", "combination:5,2", "fig3"}) {
            Network n = builtin_network(name);
            CHECK(add_supersource(n).mu() == n.mu());
        }
    }

    // order-extension independence of the channel map on the butterfly:
    // all 9 inputs agree across the canonical order and two other extensions
    {
        Network n = builtin_network("butterfly");
        Alphabet f3 = Alphabet::field(3);
        Certificate cert = load_certificate_file(data_dir() + "/example1.cert.json");
        EdgeOrder canonical = n.canonical_edge_order();
        EdgeOrder interleaved;
        interleaved.rank = {{"e1", 1}, {"e3", 2}, {"e4", 3}, {"e2", 4}, {"e5", 5},
                            {"e6", 6}, {"e7", 7}, {"e8", 8}, {"e9", 9}};
        EdgeOrder late;  // list e9 before e8; the function there is symmetric
        late.rank = {{"e1", 1}, {"e2", 2}, {"e3", 3}, {"e4", 4}, {"e5", 5},
                     {"e6", 6}, {"e7", 7}, {"e9", 8}, {"e8", 9}};
        for (int i = 0; i < 9; ++i) {
            auto cw = index_to_tuple(i, 3, 2);
            auto base = transmit(n, f3, cert.network_code, cw).by_edge;
            CHECK(transmit_with_order(n, f3, canonical, cert.network_code, cw).by_edge ==
                  base);
            CHECK(transmit_with_order(n, f3, interleaved, cert.network_code, cw).by_edge ==
                  base);
            CHECK(transmit_with_order(n, f3, late, cert.network_code, cw).by_edge == base);
        }
    }

    CHECK(seconds_since(t0) < 300.0);
}

TEST_CASE("acceptance 9: exported LP passes an independent grammar check") {
    Network n = builtin_network("butterfly");
    Alphabet a = Alphabet::field(2);
    const int M = 4;
    FeasibilityModel m = build_model(n, a, M);
    LpSummary s = lp_parse(m.export_lp());

    // every variable referenced by a constraint is declared binary
    for (const auto& v : s.variables_used) CHECK(s.binaries.count(v) == 1);

    // counts from an independent index-set enumeration
    const int q = 2;
    long x = 0, y = 0, z = 0, w = 0, c3 = 0, c7 = 0, c4 = 0, c5 = 0, c6 = 0;
    for (int v = 0; v < n.vertex_count(); ++v) {
        long in_sp = ipow(q, static_cast<int>(n.in_edges(v).size()));
        long out_sp = ipow(q, static_cast<int>(n.out_edges(v).size()));
        if (!n.is_terminal(v)) x += M * out_sp;
        if (v != n.source()) y += M * in_sp;
        if (n.is_intermediate(v)) {
            z += in_sp * out_sp;
            w += M * in_sp * out_sp;
            c4 += in_sp;
            c5 += M * in_sp;
            c6 += M * out_sp;
        }
        if (n.is_terminal(v)) c7 += in_sp;
    }
    for (int e = 0; e < n.edge_count(); ++e)
        c3 += M * ipow(q, static_cast<int>(n.in_edges(n.edge_head(e)).size()));

    CHECK(static_cast<long>(s.binaries.size()) == x + y + z + w);
    auto by_letter = [&](char letter) {
        long cnt = 0;
        for (const auto& name : s.binaries)
            if (name[0] == letter) ++cnt;
        return cnt;
    };
    CHECK(by_letter('x') == x);
    CHECK(by_letter('y') == y);
    CHECK(by_letter('z') == z);
    CHECK(by_letter('w') == w);

    CHECK(s.constraints_by_tag["C1"] == M * 5);
    CHECK(s.constraints_by_tag["C2"] == M * 6);
    CHECK(s.constraints_by_tag["C3"] == c3);
    CHECK(s.constraints_by_tag["C4"] == c4);
    CHECK(s.constraints_by_tag["C5"] == c5);
    CHECK(s.constraints_by_tag["C6"] == c6);
    CHECK(s.constraints_by_tag["C7"] == c7);
    CHECK(s.constraints_by_tag["MC"] == 4 * w);

    // the builder's own stats agree with the same enumeration
    auto st = m.stats();
    CHECK(st.variables_by_kind.at("x") == x);
    CHECK(st.variables_by_kind.at("y") == y);
    CHECK(st.variables_by_kind.at("z") == z);
    CHECK(st.variables_by_kind.at("w") == w);
    CHECK(st.constraints_by_tag.at("C3") == c3);
    CHECK(st.constraints_by_tag.at("MC") == 4 * w);
}
