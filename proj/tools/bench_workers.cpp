// Benchmark of the Monte Carlo trial loop: serial reference implementation
// vs the OpenMP kernel at several worker counts. The two must produce
// identical statistics (the per-trial seeding makes results independent of
// scheduling), so this doubles as an equality check; exit is nonzero if any
// parallel run disagrees with the serial reference.
//
// Usage: bpgd-bench [trials] [worker counts...]   (defaults: 500 trials; 1 2 4)
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bpgd/montecarlo.hpp"

using namespace bpgd;

namespace {

// L x L circulant with rows {i, i+1 mod L}: its hypergraph product with
// itself is a toric-style code on 2 L^2 qubits, big enough to exercise the
// kernels.
BitMatrix ring_matrix(std::size_t L) {
    BitMatrix M(L, L);
    for (std::size_t i = 0; i < L; ++i) {
        M.set(i, i, true);
        M.set(i, (i + 1) % L, true);
    }
    return M;
}

bool same_counts(const TrialStats& a, const TrialStats& b) {
    return a.trials == b.trials && a.outcome_counts == b.outcome_counts &&
           a.block_errors == b.block_errors && a.decimation_total == b.decimation_total &&
           a.postcondition_violations == b.postcondition_violations;
}

void print_row(const char* impl, const std::string& workers, const TrialStats& st,
               double base_wall, const char* verdict) {
    std::printf("%-9s %-8s %9.3f %11.1f %8.2fx  %s\n", impl, workers.c_str(), st.wall_s,
                st.trials / st.wall_s, base_wall / st.wall_s, verdict);
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 500;
    std::vector<int> worker_counts;
    for (int i = 2; i < argc; ++i) worker_counts.push_back(std::atoi(argv[i]));
    if (worker_counts.empty()) worker_counts = {1, 2, 4};

    CssCode code = hypergraph_product(ring_matrix(12), ring_matrix(12), "toric_12");
    DecoderSpec spec;
    spec.kind = DecoderKind::BpgdRd;
    NoiseModel noise{NoiseKind::BitFlip, 0.05};
    StoppingRule rule{trials, 0};
    const std::uint64_t seed = 1;

    std::printf("code=%s n=%zu k=%zu decoder=%s p=%.3g T=%d trials=%llu\n", code.name().c_str(),
                code.n(), code.k(), to_string(spec.kind), noise.p, spec.gd.T,
                static_cast<unsigned long long>(trials));
#ifdef _OPENMP
    std::printf("openmp: enabled, %d processor(s) available\n", omp_get_num_procs());
#else
    std::printf("openmp: disabled in this build\n");
#endif
    std::printf("%-9s %-8s %9s %11s %9s  %s\n", "impl", "workers", "wall_s", "trials/s",
                "speedup", "stats");

    TrialStats base = run_trials_serial(code, noise, spec, rule, seed);
    print_row("serial", "-", base, base.wall_s, "reference");

    bool all_same = true;
    for (int w : worker_counts) {
        TrialStats st = run_trials(code, noise, spec, rule, seed, w);
        bool same = same_counts(st, base);
        all_same = all_same && same;
        print_row("parallel", std::to_string(w), st, base.wall_s, same ? "identical" : "DIFFERS");
    }
    std::printf("block_errors=%llu bler=%.4g nonconv_frac=%.4g r_avg=%.4g\n",
                static_cast<unsigned long long>(base.block_errors), base.bler(),
                base.nonconv_frac(), base.r_avg());
    if (!all_same) {
        std::printf("FAIL: parallel statistics differ from the serial reference\n");
        return 1;
    }
    return 0;
}
