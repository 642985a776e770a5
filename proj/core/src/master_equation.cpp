#include "rydchip/master_equation.hpp"

#include "rydchip/error.hpp"

#include <Eigen/Sparse>
#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <complex>
#include <numeric>

namespace rydchip {

namespace {

using cd = std::complex<double>;
using State = std::vector<double>;

constexpr int kLost = 2;

// Photon states 0..top, the same range the trajectory sectors cover.
struct FullSpace {
  int top;
  int dim;
  int index(int a1, int a2, int p) const { return (a1 * 3 + a2) * (top + 1) + p; }
};

double level_energy(int a, double delta) {
  if (a == 0) return 0.5 * delta;
  if (a == 1) return -0.5 * delta;
  return 0.0;
}

// Every jump operator maps a basis state to at most one basis state, so
// L rho L^dag is a scatter of rho weighted by the coefficients.
struct Jump {
  std::vector<int> target;  // -1 when L annihilates the state
  std::vector<double> coeff;
};

class Lindblad {
 public:
  Lindblad(const CavityGateConfig& cfg, const FullSpace& fs) : dim_(fs.dim) {
    const double delta = cfg.delta_c / cfg.g;
    std::vector<Eigen::Triplet<cd>> h;
    std::vector<Jump> jumps(6, Jump{std::vector<int>(fs.dim, -1), std::vector<double>(fs.dim, 0.0)});
    auto set = [&](int k, int from, int to, double c) {
      jumps[k].target[from] = to;
      jumps[k].coeff[from] = c;
    };

    for (int a1 = 0; a1 < 3; ++a1) {
      for (int a2 = 0; a2 < 3; ++a2) {
        for (int p = 0; p <= fs.top; ++p) {
          const int i = fs.index(a1, a2, p);
          h.emplace_back(i, i, level_energy(a1, delta) + level_energy(a2, delta));
          if (p < fs.top) {
            // g (c^dag sigma_- + h.c.), g = 1
            const double c = std::sqrt(p + 1.0);
            if (a1 == 1) {
              const int j = fs.index(0, a2, p + 1);
              h.emplace_back(j, i, c);
              h.emplace_back(i, j, c);
            }
            if (a2 == 1) {
              const int j = fs.index(a1, 0, p + 1);
              h.emplace_back(j, i, c);
              h.emplace_back(i, j, c);
            }
          }
          const double sg = std::sqrt(cfg.gamma);
          if (a1 != kLost) set(a1, i, fs.index(kLost, a2, p), sg);
          if (a2 != kLost) set(2 + a2, i, fs.index(a1, kLost, p), sg);
          if (p > 0) set(4, i, fs.index(a1, a2, p - 1), std::sqrt(cfg.kappa * (cfg.n_th + 1.0) * p));
          if (p < fs.top) set(5, i, fs.index(a1, a2, p + 1), std::sqrt(cfg.kappa * cfg.n_th * (p + 1)));
        }
      }
    }

    Eigen::VectorXd decay = Eigen::VectorXd::Zero(dim_);
    for (auto& jump : jumps) {
      bool active = false;
      for (int i = 0; i < dim_; ++i) {
        if (jump.coeff[i] == 0.0) jump.target[i] = -1;
        if (jump.target[i] < 0) continue;
        active = true;
        decay[i] += jump.coeff[i] * jump.coeff[i];  // L^dag L is diagonal
      }
      if (active) jumps_.push_back(std::move(jump));
    }
    for (int i = 0; i < dim_; ++i) h.emplace_back(i, i, cd(0.0, -0.5 * decay[i]));
    h_eff_.resize(dim_, dim_);
    h_eff_.setFromTriplets(h.begin(), h.end());
  }

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const cd*>(x.data()), dim_, dim_);
    Eigen::Map<Eigen::MatrixXcd> out(reinterpret_cast<cd*>(dxdt.data()), dim_, dim_);
    hr_.noalias() = h_eff_ * rho;
    // -i (H rho - rho H^dag) with rho Hermitian: rho H^dag = (H rho)^dag.
    out = cd(0.0, -1.0) * hr_ + cd(0.0, 1.0) * hr_.adjoint();
    for (const Jump& jump : jumps_) {
      for (int j = 0; j < dim_; ++j) {
        const int tj = jump.target[j];
        if (tj < 0) continue;
        const double cj = jump.coeff[j];
        for (int i = 0; i < dim_; ++i) {
          const int ti = jump.target[i];
          if (ti >= 0) out(ti, tj) += (jump.coeff[i] * cj) * rho(i, j);
        }
      }
    }
  }

 private:
  int dim_;
  Eigen::SparseMatrix<cd, Eigen::RowMajor> h_eff_;
  std::vector<Jump> jumps_;
  mutable Eigen::MatrixXcd hr_;
};

}  // namespace

OracleResult master_equation_oracle(const CavityGateConfig& cfg, std::span<const double> sample_times,
                                    const OracleOptions& options) {
  cfg.validate();
  const int n_max = cfg.cutoff();
  if (n_max > kOracleMaxCutoff) {
    throw Error(ErrorKind::OracleScope, "master-equation oracle supports n_max <= " +
                                            std::to_string(kOracleMaxCutoff) + ", got " + std::to_string(n_max));
  }
  for (size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= 0.0) || (i > 0 && sample_times[i] < sample_times[i - 1])) {
      throw Error(ErrorKind::Domain, "oracle sample times must be sorted and >= 0");
    }
  }

  const int top = dynamic_max_base(n_max) + 1;
  const FullSpace fs{top, 9 * (top + 1)};
  const PhotonDistribution dist = photon_distribution(cfg.n_th, n_max);
  const double total = std::accumulate(dist.p.begin(), dist.p.end(), 0.0);

  State x(static_cast<size_t>(2) * fs.dim * fs.dim, 0.0);
  {
    Eigen::Map<Eigen::MatrixXcd> rho(reinterpret_cast<cd*>(x.data()), fs.dim, fs.dim);
    for (int n = 0; n <= n_max; ++n) {
      const int i = options.start_in_01 ? fs.index(0, 1, n) : fs.index(1, 0, n);
      rho(i, i) = dist.p[n] / total;
    }
  }

  OracleResult out;
  auto observe = [&](const State& s, double t) {
    const Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const cd*>(s.data()), fs.dim, fs.dim);
    std::array<double, 4> pops{};
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        for (int p = 0; p <= fs.top; ++p) pops[a1 * 2 + a2] += rho(fs.index(a1, a2, p), fs.index(a1, a2, p)).real();
      }
    }
    out.times.push_back(t);
    out.populations.push_back(pops);
    out.p_tot.push_back(pops[0] + pops[1] + pops[2] + pops[3]);
    out.trace.push_back(rho.trace().real());
  };

  if (sample_times.empty()) return out;
  std::vector<double> times(sample_times.begin(), sample_times.end());
  const bool prepend = times.front() > 0.0;
  if (prepend) times.insert(times.begin(), 0.0);

  namespace ode = boost::numeric::odeint;
  const Lindblad system(cfg, fs);
  auto stepper = ode::make_controlled(options.abs_tol, options.rel_tol, ode::runge_kutta_fehlberg78<State>());
  bool skip = prepend;
  ode::integrate_times(stepper, std::cref(system), x, times.begin(), times.end(), 1e-3,
                       [&](const State& s, double t) {
                         if (skip) {
                           skip = false;
                           return;
                         }
                         observe(s, t);
                       });
  return out;
}

}  // namespace rydchip
