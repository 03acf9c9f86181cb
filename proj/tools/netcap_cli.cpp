#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netcap/json_io.hpp"
#include "netcap/mip_model.hpp"
#include "netcap/search.hpp"

using namespace netcap;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeout = 3;

struct NetworkSource {
    std::string file;
    std::string builtin;

    void add_to(CLI::App* cmd) {
        auto* f = cmd->add_option("--network", file, "network JSON file");
        auto* b = cmd->add_option("--builtin", builtin,
                                  "builtin instance (butterfly, combination:N,K, fig3)");
        f->excludes(b);
        cmd->callback([]() {});
    }

    Network load() const {
        if (!builtin.empty()) return builtin_network(builtin);
        if (!file.empty()) return load_network_file(file);
        throw CLI::ValidationError("either --network or --builtin is required");
    }
};

void print_validation(const RawNetwork& raw, bool as_json, int* exit_code) {
    std::vector<AxiomViolation> errs;
    auto net = Network::validate(raw, &errs);
    if (as_json) {
        json j;
        j["network"] = raw.name;
        j["valid"] = net.has_value();
        j["violations"] = json::array();
        for (const auto& e : errs)
            j["violations"].push_back({{"axiom", e.axiom}, {"message", e.message}});
        if (net) {
            j["vertices"] = net->vertex_count();
            j["edges"] = net->edge_count();
            j["mu"] = net->mu();
        }
        std::cout << j.dump(2) << "\n";
    } else if (net) {
        std::cout << "valid: " << net->vertex_count() << " vertices, " << net->edge_count()
                  << " edges, " << net->terminals().size() << " terminals, mu = " << net->mu()
                  << "\n";
    } else {
        std::cout << "invalid (" << errs.size() << " violation(s)):\n";
        for (const auto& e : errs)
            std::cout << "  axiom " << e.axiom << ": " << e.message << "\n";
    }
    *exit_code = net ? kExitOk : kExitInfeasible;
}

void write_optional_file(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netcap: exact 1-shot capacities of multicast networks over small alphabets"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable JSON output");

    int exit_code = kExitOk;

    // ---- validate ----
    auto* validate = app.add_subcommand("validate", "check the network axioms");
    NetworkSource val_src;
    val_src.add_to(validate);
    validate->callback([&]() {
        RawNetwork raw;
        if (!val_src.builtin.empty())
            raw = builtin_network(val_src.builtin).to_raw();
        else if (!val_src.file.empty())
            raw = load_raw_network_file(val_src.file);
        else
            throw CLI::ValidationError("either --network or --builtin is required");
        print_validation(raw, as_json, &exit_code);
    });

    // ---- mincut ----
    auto* mincut = app.add_subcommand("mincut", "per-terminal min-cuts and mu");
    NetworkSource mc_src;
    mc_src.add_to(mincut);
    mincut->callback([&]() {
        Network net = mc_src.load();
        if (as_json) {
            json j;
            j["network"] = net.name();
            j["cuts"] = json::object();
            for (int t : net.terminals())
                j["cuts"][net.vertex_id(t)] = net.min_cut(t);
            j["mu"] = net.mu();
            std::cout << j.dump(2) << "\n";
        } else {
            for (int t : net.terminals())
                std::cout << "min-cut(S, " << net.vertex_id(t) << ") = " << net.min_cut(t)
                          << "\n";
            std::cout << "mu = " << net.mu() << "\n";
        }
    });

    // ---- model ----
    auto* model = app.add_subcommand("model", "build and export the feasibility model");
    NetworkSource mo_src;
    mo_src.add_to(model);
    int mo_q = 2, mo_M = 1;
    bool mo_field = false, mo_rf = false, mo_sym = false;
    std::string mo_format = "lp", mo_outdir = ".";
    model->add_option("--q", mo_q, "alphabet size")->required();
    model->add_flag("--field", mo_field, "require finite-field structure");
    model->add_option("--M", mo_M, "outer code size")->required();
    model->add_flag("--routing-fix", mo_rf, "fix single-input vertices to routing");
    model->add_flag("--symmetry", mo_sym, "add lexicographic column inequalities");
    model->add_option("--format", mo_format, "lp or mps")
        ->check(CLI::IsMember({"lp", "mps"}));
    model->add_option("--out", mo_outdir, "output directory");
    model->callback([&]() {
        Network net = mo_src.load();
        Alphabet a = Alphabet::make(mo_q, mo_field);
        ModelOptions opts;
        opts.routing_fix = mo_rf;
        opts.symmetry_break = mo_sym;
        auto m = build_model(net, a, mo_M, opts);
        std::string base = mo_outdir + "/" + m.canonical_file_name("");
        std::string path = base + "." + mo_format;
        write_optional_file(path, mo_format == "lp" ? m.export_lp() : m.export_mps());
        write_optional_file(base + ".meta.json", m.metadata_json());
        auto stats = m.stats();
        if (as_json) {
            json j;
            j["file"] = path;
            j["variables"] = stats.variables_by_kind;
            j["constraints"] = stats.constraints_by_tag;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "wrote " << path << "\n";
            for (const auto& [k, v] : stats.variables_by_kind)
                std::cout << "  " << k << " variables: " << v << "\n";
            for (const auto& [k, v] : stats.constraints_by_tag)
                std::cout << "  " << k << " constraints: " << v << "\n";
        }
    });

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "decide feasibility at a fixed code size");
    NetworkSource so_src;
    so_src.add_to(solve);
    int so_q = 2, so_M = 1, so_threads = 1;
    bool so_field = false, so_linear = false, so_super = false;
    bool so_no_rf = false, so_no_sym = false;
    double so_tl = 0.0;
    std::string so_cert_out;
    solve->add_option("--q", so_q, "alphabet size")->required();
    solve->add_flag("--field", so_field, "require finite-field structure");
    solve->add_option("--M", so_M, "outer code size")->required();
    solve->add_flag("--linear", so_linear, "restrict to linear network codes");
    solve->add_flag("--supersource", so_super, "apply the supersource transform first");
    solve->add_flag("--no-routing-fix", so_no_rf, "disable the routing trick");
    solve->add_flag("--no-symmetry", so_no_sym, "disable emission ordering");
    solve->add_option("--time-limit", so_tl, "seconds, 0 = unlimited");
    solve->add_option("--threads", so_threads, "worker count");
    solve->add_option("--cert-out", so_cert_out, "write the certificate here");
    solve->callback([&]() {
        Network net = so_src.load();
        if (so_linear) so_field = true;
        Alphabet a = Alphabet::make(so_q, so_field);
        Network target = so_super ? add_supersource(net) : net;
        SearchOptions opts;
        opts.routing_fix = !so_no_rf;
        opts.symmetry_break = !so_no_sym;
        opts.linear_only = so_linear;
        opts.time_limit_s = so_tl;
        opts.threads = so_threads;
        auto r = decide_feasible(target, a, so_M, opts);
        std::optional<Certificate> cert;
        if (r.status == FeasStatus::Feasible) {
            cert = so_super ? strip_supersource(net, target, *r.certificate) : *r.certificate;
            auto rep = verify_certificate(net, *cert);
            if (!rep.ok) throw std::runtime_error("internal: certificate failed verification: " +
                                                  rep.detail);
            if (!so_cert_out.empty()) save_certificate_file(*cert, so_cert_out);
        }
        if (as_json) {
            json j;
            j["network"] = net.name();
            j["q"] = so_q;
            j["M"] = so_M;
            j["status"] = to_string(r.status);
            j["nodes"] = r.nodes;
            j["wall_ms"] = r.wall_ms;
            j["supersource_used"] = so_super;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << to_string(r.status) << " (M = " << so_M << ", " << r.nodes
                      << " nodes, " << r.wall_ms << " ms)\n";
        }
        exit_code = r.status == FeasStatus::Feasible    ? kExitOk
                    : r.status == FeasStatus::Infeasible ? kExitInfeasible
                                                         : kExitTimeout;
    });

    // ---- capacity / linear-capacity ----
    for (bool linear : {false, true}) {
        auto* cap = app.add_subcommand(linear ? "linear-capacity" : "capacity",
                                       linear ? "exact 1-shot linear capacity"
                                              : "exact 1-shot capacity");
        auto src = std::make_shared<NetworkSource>();
        src->add_to(cap);
        auto q = std::make_shared<int>(2);
        auto field = std::make_shared<bool>(false);
        auto threads = std::make_shared<int>(1);
        auto tl = std::make_shared<double>(0.0);
        auto no_super = std::make_shared<bool>(false);
        auto no_rf = std::make_shared<bool>(false);
        auto lb_only = std::make_shared<bool>(false);
        auto cert_out = std::make_shared<std::string>();
        cap->add_option("--q", *q, "alphabet size")->required();
        cap->add_flag("--field", *field, "require finite-field structure");
        cap->add_flag("--no-supersource", *no_super, "never apply the supersource transform");
        cap->add_flag("--no-routing-fix", *no_rf, "disable the routing trick");
        cap->add_flag("--lower-bound", *lb_only,
                      "best-effort mode: grow a code, report bounds");
        cap->add_option("--time-limit", *tl, "seconds, 0 = unlimited");
        cap->add_option("--threads", *threads, "worker count");
        cap->add_option("--cert-out", *cert_out, "write the certificate here");
        cap->callback([&, linear, src, q, field, threads, tl, no_super, no_rf, lb_only,
                       cert_out]() {
            Network net = src->load();
            Alphabet a = Alphabet::make(*q, linear ? true : *field);
            CapacityOptions opts;
            opts.search.threads = *threads;
            opts.search.time_limit_s = *tl;
            opts.search.routing_fix = !*no_rf;
            opts.use_supersource = !*no_super;
            opts.lower_bound_only = *lb_only;
            auto r = linear ? linear_max_code_size(net, a, opts) : max_code_size(net, a, opts);
            if (r.certificate) {
                auto rep = verify_certificate(net, *r.certificate);
                if (!rep.ok)
                    throw std::runtime_error("internal: certificate failed verification: " +
                                             rep.detail);
                if (!cert_out->empty()) save_certificate_file(*r.certificate, *cert_out);
            }
            if (as_json) {
                std::cout << r.to_json(net.name(), *q);
            } else {
                if (r.status == CapacityResult::Status::Proven) {
                    std::cout << "M* = " << r.max_code_size << ", capacity = log_" << *q << " "
                              << r.max_code_size << " = " << r.capacity << " (proven)\n";
                } else {
                    std::cout << "bounds: " << r.lower << " <= M* <= " << r.upper
                              << " (best capacity >= " << r.capacity << ")\n";
                }
                std::cout << "  nodes = " << r.nodes << ", wall = " << r.wall_ms << " ms"
                          << (r.supersource_used ? ", supersource transform fired" : "")
                          << "\n";
            }
            exit_code =
                r.status == CapacityResult::Status::Proven ? kExitOk : kExitTimeout;
        });
    }

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "re-check a certificate by simulation");
    NetworkSource ve_src;
    ve_src.add_to(verify);
    std::string ve_cert;
    verify->add_option("--certificate", ve_cert, "certificate JSON file")->required();
    verify->callback([&]() {
        Network net = ve_src.load();
        auto cert = load_certificate_file(ve_cert);
        auto rep = verify_certificate(net, cert);
        if (as_json) {
            json j;
            j["network"] = net.name();
            j["ok"] = rep.ok;
            j["detail"] = rep.detail;
            j["code_size"] = cert.outer_code.codewords.size();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << (rep.ok ? "yes: " : "no: ") << rep.detail << "\n";
        }
        exit_code = rep.ok ? kExitOk : kExitInfeasible;
    });

    // ---- examples ----
    auto* examples = app.add_subcommand("examples", "list builtin instances");
    examples->callback([&]() {
        json j = json::array();
        for (const auto& name : {std::string("butterfly"), std::string("combination:5,2"),
                                 std::string("fig3")}) {
            Network net = builtin_network(name);
            if (as_json) {
                j.push_back({{"name", name},
                             {"vertices", net.vertex_count()},
                             {"edges", net.edge_count()},
                             {"terminals", net.terminals().size()},
                             {"mu", net.mu()}});
            } else {
                std::cout << name << ": " << net.vertex_count() << " vertices, "
                          << net.edge_count() << " edges, " << net.terminals().size()
                          << " terminals, mu = " << net.mu() << "\n";
            }
        }
        if (as_json) std::cout << j.dump(2) << "\n";
        std::cout << (as_json ? "" : "combination:N,K is available for any N >= K >= 1\n");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return exit_code;
}
