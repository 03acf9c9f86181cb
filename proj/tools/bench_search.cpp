// Benchmark: serial reference search vs the OpenMP-parallel search on a
// fixed set of decision instances. Reports wall time, node counts and the
// speedup; exits nonzero if the two implementations ever disagree.

#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "netcap/alphabet.hpp"
#include "netcap/network.hpp"
#include "netcap/search.hpp"

namespace {

struct Instance {
    std::string builtin;
    int q;
    bool field;
    int M;
    bool linear_only;
};

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    if (argc > 1) threads = std::stoi(argv[1]);
    if (threads < 2) threads = 4;

    const std::vector<Instance> instances = {
        {"butterfly", 2, true, 4, false},
        {"butterfly", 3, true, 9, false},
        {"butterfly", 3, true, 9, true},
        {"combination:5,2", 2, true, 4, false},   // infeasible: forces full search
        {"combination:5,2", 3, true, 6, false},
        {"combination:4,2", 3, true, 9, false},   // infeasible at the cut bound
    };

    std::printf("%-22s %2s %3s %-6s | %12s %10s | %12s %10s | %7s %5s\n", "network",
                "q", "M", "mode", "serial ms", "nodes", "parallel ms", "nodes",
                "speedup", "agree");
    bool all_agree = true;
    for (const auto& inst : instances) {
        netcap::Network net = netcap::builtin_network(inst.builtin);
        netcap::Alphabet a = netcap::Alphabet::make(inst.q, inst.field);

        netcap::SearchOptions opts;
        opts.linear_only = inst.linear_only;

        opts.threads = 1;
        auto serial = netcap::decide_feasible_serial(net, a, inst.M, opts);

        opts.threads = threads;
        auto parallel = netcap::decide_feasible(net, a, inst.M, opts);

        bool agree = serial.status == parallel.status;
        all_agree = all_agree && agree;
        double speedup = parallel.wall_ms > 0 ? serial.wall_ms / parallel.wall_ms : 0.0;
        std::printf("%-22s %2d %3d %-6s | %12.2f %10llu | %12.2f %10llu | %6.2fx %5s\n",
                    inst.builtin.c_str(), inst.q, inst.M,
                    inst.linear_only ? "linear" : "full", serial.wall_ms,
                    static_cast<unsigned long long>(serial.nodes), parallel.wall_ms,
                    static_cast<unsigned long long>(parallel.nodes), speedup,
                    agree ? "yes" : "NO");
    }
    if (!all_agree) {
        std::fprintf(stderr, "serial and parallel search disagreed on some instance\n");
        return 1;
    }
    return 0;
}
