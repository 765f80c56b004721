// Serial reference vs OpenMP kernels. Prints one line per kernel with the best of --reps runs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "rpkit/gram.hpp"
#include "rpkit/monte_carlo.hpp"
#include "rpkit/parallel.hpp"
#include "rpkit/sampling.hpp"

using namespace rpkit;

namespace {

double best_of(int reps, const std::function<void()>& f)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool identical)
{
    std::printf("%-22s serial %9.4fs  parallel %9.4fs  speedup %5.2fx  identical %s\n", name, serial, parallel,
                serial / parallel, identical ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rpkit serial vs parallel benchmark"};
    int threads = 0, reps = 3, grid_n = 2000;
    std::size_t paths = 200'000, samples = 4'000'000;
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
    app.add_option("--reps", reps, "Repetitions, best time reported")->check(CLI::PositiveNumber);
    app.add_option("--grid-size", grid_n, "Gram matrix size")->check(CLI::PositiveNumber);
    app.add_option("--paths", paths, "Paths for sampling and empirical covariance");
    app.add_option("--samples", samples, "Monte Carlo samples");
    CLI11_PARSE(app, argc, argv);

    set_num_threads(threads);
    std::printf("openmp %s, threads %d\n", openmp_enabled() ? "on" : "off", num_threads());

    const auto big = Grid::range(0.001, 0.001 * grid_n, 0.001);
    const auto kernel = KernelSpec::fractional_brownian(0.3);
    GramMatrix gs, gp;
    const double g_serial = best_of(reps, [&] { gs = reference::gram_serial(kernel, big); });
    const double g_par = best_of(reps, [&] { gp = gram(kernel, big); });
    row("gram", g_serial, g_par, gs.entries == gp.entries);

    const auto grid = Grid::range(0.05, 2.0, 0.05);
    const auto p = ProcessSpec::fractional_brownian(0.3);
    std::optional<PathEnsemble> es, ep;
    const double s_serial = best_of(reps, [&] { es = reference::sample_paths_serial(p, grid, paths, RandomSeed{1}); });
    const double s_par = best_of(reps, [&] { ep = sample_paths(p, grid, paths, RandomSeed{1}); });
    row("sample_paths", s_serial, s_par, es->paths == ep->paths);

    EmpiricalCovariance cs, cp;
    const double c_serial = best_of(reps, [&] { cs = reference::empirical_covariance_serial(*es); });
    const double c_par = best_of(reps, [&] { cp = empirical_covariance(*ep); });
    row("empirical_covariance", c_serial, c_par, cs.matrix == cp.matrix);

    const std::vector<double> v{0.5, 0.5, 0.0};
    MCReport ms, mp;
    const double m_serial = best_of(reps, [&] { ms = reference::mc_characteristic_serial(v, samples, RandomSeed{2}); });
    const double m_par = best_of(reps, [&] { mp = mc_characteristic(v, samples, RandomSeed{2}); });
    row("mc_characteristic", m_serial, m_par, ms.estimate == mp.estimate);
    return 0;
}
