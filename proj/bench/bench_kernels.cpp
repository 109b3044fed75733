// Parallel kernels against their serial runs and the naive reference routes.
// Usage: bench_kernels [repeats]

#include "cxdim/cli/builtins.hpp"
#include "cxdim/dimensions.hpp"
#include "cxdim/diophantine.hpp"
#include "cxdim/dynamics.hpp"
#include "cxdim/reference.hpp"
#include "cxdim/tube.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

using namespace cxdim;

namespace {

int repeats = 3;

double best_of(const std::function<double()>& f, double& result) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    result = f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const std::string& name, const std::function<double(Exec)>& kernel,
         const std::function<double()>& reference = nullptr) {
  double rp = 0, rs = 0, rr = 0;
  const double tp = best_of([&] { return kernel(Exec::parallel); }, rp);
  const double ts = best_of([&] { return kernel(Exec::serial); }, rs);
  std::printf("%-28s parallel %9.4f s  serial %9.4f s  speedup %5.2f  agree %s", name.c_str(), tp, ts, ts / tp,
              rp == rs ? "yes" : "NO");
  if (reference) {
    const double tr = best_of(reference, rr);
    std::printf("  reference %9.4f s  (value %.12g vs %.12g)", tr, rp, rr);
  }
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) repeats = std::max(1, std::atoi(argv[1]));
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), repeats);

  const auto ng = cli::builtin_spec("nongeneric");
  const auto fib = cli::builtin_spec("fibonacci");
  const auto cantor = cli::builtin_spec("cantor");
  const auto mc = cli::builtin_spec("modified-cantor");

  row("find_roots nongeneric t<600", [&](Exec e) {
    RootFinderOptions o;
    o.exec = e;
    return static_cast<double>(find_roots(ng, {-6, 1.5, 0, 600}, o).roots.size());
  });

  row("enumerate_lengths mcantor", [&](Exec e) {
    return enumerate_lengths(mc, 1e-9, 10'000'000, e).enumerated_total();
  }, [&] {
    double s = 0;
    for (const auto& [l, m] : reference::word_lengths(mc, 1e-9)) s += l * static_cast<double>(m);
    return s;
  });

  const FlowSpec flow = FlowSpec::from_string(cantor);
  row("euler_log_derivative L=22", [&](Exec e) {
    return euler_log_derivative(flow, {flow.dimension() + 1, 0.0}, 22, e).value.real();
  });

  row("psi_w nonlattice x=2^24", [&](Exec e) {
    return psi_w(FlowSpec::from_string(cli::builtin_spec("generic-pair")), std::ldexp(1.0, 24), 40, e);
  }, [&] { return reference::psi_words(FlowSpec::from_string(cli::builtin_spec("generic-pair")), std::ldexp(1.0, 24)); });

  const Quad alpha = boost::multiprecision::sqrt(Quad(2));
  row("badly_approximable q<=1e7", [&](Exec e) { return badly_approximable_constant(alpha, 10'000'000, e); },
      [&] { return reference::badly_approximable_serial(std::sqrt(2.0L), 10'000'000); });

  row("overlap cantor x=2/3", [&](Exec e) {
    std::vector<double> ladder;
    for (int k = 4; k <= 12; ++k) ladder.push_back(0.7 * 3 * std::pow(1.0 / 3, k));
    return overlap_dimension_and_content(cantor, 2.0 / 3, ladder, -1, e).M_star;
  });

  row("content estimator fibonacci", [&](Exec e) {
    return minkowski_content_empirical(fib, geometric_ladder(1e-2, 1e-6, 17), e).D_est;
  });
  return 0;
}
