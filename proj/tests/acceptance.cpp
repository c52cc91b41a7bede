// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jtheta/error.hpp"
#include "jtheta/jacobi_group.hpp"
#include "jtheta/lattice_enum.hpp"
#include "jtheta/series.hpp"
#include "jtheta/verify.hpp"
#include "oracles.hpp"
#include "reconstruction.hpp"

using namespace jtheta;

namespace {

const Complex I{0.0, 1.0};
const Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

QuadraticForm form_2i4() { return QuadraticForm::validate(IntMatrix::identity(4, 2)); }
std::vector<IntVector> dirs_e3e4() { return {{0, 0, 1, 0}, {0, 0, 0, 1}}; }
const ComplexVector kIso{1.0, I, 0.0, 0.0};
const ComplexVector kOrtho{1.0, 1.0, 0.0, 0.0};
const ComplexVector kGen{0.0, 0.0, 1.0, 0.0};

ThetaSpec spec(const ComplexVector& v, unsigned k) {
  return ThetaSpec::make(form_2i4(), dirs_e3e4(), v, k);
}

std::vector<Gamma0Element> gammas() {
  return {gamma0_element(1, 1, 0, 1, 4), gamma0_element(1, 0, 4, 1, 4),
          gamma0_element(-3, -1, 4, 1, 4)};
}
const std::vector<IntVector> kLambdas{{1, 0}, {0, 1}, {2, -1}};
const std::vector<IntVector> kMus{{0, 0}, {1, -2}, {3, 1}};

const auto kPoints = default_sample_points(2, 8, 1);
VerifyOptions opts(double tol) {
  VerifyOptions o;
  o.tol = tol;
  o.eps = 1e-10;
  return o;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

void modular_theta(Outcome& o) {
  double worst = 0.0;
  for (unsigned k : {0u, 1u, 2u, 4u})
    for (const auto& g : gammas()) {
      const auto r = verify_modular(SeriesKind::kTheta, spec(kIso, k), g, kPoints, opts(1e-8));
      worst = std::max(worst, r.max_residual);
      o.require(r.passed && r.samples.size() == 8, "k=" + std::to_string(k));
    }
  o.detail << "max relative residual " << sci(worst);
}

void elliptic_theta(Outcome& o) {
  double worst = 0.0;
  const auto index = index_from_gram(spec(kIso, 0).directions.gram());
  for (unsigned k : {0u, 1u, 2u, 4u})
    for (const auto& lambda : kLambdas)
      for (const auto& mu : kMus) {
        const auto r = verify_elliptic(SeriesKind::kTheta, spec(kIso, k), lambda, mu, kPoints,
                                       opts(1e-8));
        worst = std::max(worst, r.max_residual);
        o.require(r.passed, "residual");
      }
  // Bitwise mu-independence of the automorphy factor.
  for (const auto& p : kPoints)
    for (const auto& lambda : kLambdas) {
      const Complex f0 = elliptic_factor(index, p.tau, p.z, lambda, kMus[0]);
      for (const auto& mu : kMus)
        o.require(elliptic_factor(index, p.tau, p.z, lambda, mu) == f0, "mu-independence");
    }
  o.detail << "max relative residual " << sci(worst) << ", mu-independence exact";
}

// Psi law with E2 replaced by the classical 1 - 24 sum sigma_1 q^m.
double classical_psi_residual() {
  const auto s = spec(kOrtho, 2);
  const auto g = gamma0_element(1, 0, 4, 1, 4);
  const auto index = index_from_gram(s.directions.gram());
  double worst = 0.0;
  for (const auto& p : kPoints) {
    auto psi = [&](Complex tau, const ComplexVector& z) {
      const Complex e2c = -12.0 * eisenstein_e2(tau, 1e-12);
      return theta_eval(s, tau, z, 1e-10) +
             2.0 * s.v.q_of_v() * e2c * theta_eval(s.with_exponent(0), tau, z, 1e-10);
    };
    const auto a = act(g, p.tau, p.z);
    const Complex lhs = psi(a.tau, a.z);
    const Complex rhs = modular_factor(g, 2 + 2, index, p.tau, p.z) * psi(p.tau, p.z);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return worst;
}

void psi_laws(Outcome& o) {
  double worst = 0.0;
  for (unsigned k : {2u, 3u, 4u}) {
    for (const auto& g : gammas()) {
      const auto r = verify_modular(SeriesKind::kPsi, spec(kOrtho, k), g, kPoints, opts(1e-8));
      worst = std::max(worst, r.max_residual);
      o.require(r.passed, "modular k=" + std::to_string(k));
    }
    for (const auto& lambda : kLambdas) {
      const auto r = verify_elliptic(SeriesKind::kPsi, spec(kOrtho, k), lambda, kMus[1], kPoints,
                                     opts(1e-8));
      worst = std::max(worst, r.max_residual);
      o.require(r.passed, "elliptic k=" + std::to_string(k));
    }
  }
  const double classical = classical_psi_residual();
  o.require(classical > 1e-3, "classical E2 normalization unexpectedly satisfies the law");
  o.detail << "max relative residual " << sci(worst) << ", classical E2 residual "
           << sci(classical);
}

void generating(Outcome& o) {
  const auto s = spec(kOrtho, 0);
  const auto r = verify_generating(s.form, s.directions, s.v, gamma0_element(1, 0, 4, 1, 4), 6,
                                   kPoints, opts(1e-6));
  o.require(r.passed && r.samples.size() == 8 * 7, "per-coefficient residual");
  o.detail << "max per-coefficient residual " << sci(r.max_residual);
}

void congruence(Outcome& o) {
  const auto form = form_2i4();
  const auto h = DirectionSet::make(form, dirs_e3e4());
  double worst = 0.0;
  for (const IntVector& p : {IntVector(4, 0), IntVector{2, 0, 0, 0}})
    for (unsigned k : {0u, 1u, 2u}) {
      const auto r = verify_congruence(form, p, kIso, k, h, gamma0_element(1, 0, 4, 1, 4),
                                       kPoints, opts(1e-8));
      worst = std::max(worst, r.max_residual);
      o.require(r.passed, "k=" + std::to_string(k));
    }
  o.detail << "max relative residual " << sci(worst);
}

void support(Outcome& o) {
  std::size_t checked = 0;
  bool boundary = false;
  for (const auto& v : {kIso, kOrtho, kGen})
    for (unsigned k = 0; k <= 4; ++k) {
      const auto s = spec(v, k);
      const auto r = verify_support(theta_coeffs(s, 10), s.directions.gram(), 0.0);
      o.require(r.passed && r.max_residual == 0.0, "violation");
      checked += r.samples.size();
      if (v == kGen && k == 0)
        for (const auto& smp : r.samples)
          if (smp.l == 1 && smp.nu == IntVector{2, 0} && smp.lhs == smp.rhs &&
              smp.abs_residual == 0.0)
            boundary = true;
    }
  o.require(boundary, "boundary key (1,(2,0))");
  o.detail << checked << " coefficients, 0 violations, boundary slack 0";
}

void reconstruction(Outcome& o) {
  double worst = 0.0;
  for (unsigned k = 0; k <= 4; ++k) {
    const auto s = spec({1.0, 0.0, 1.0, 0.0}, k);
    worst = std::max(worst, recon::max_difference(theta_coeffs(s, 6), recon::reconstruct(s, 6)));
  }
  o.require(worst < 1e-10, "reconstruction");
  o.detail << "max coefficient difference " << sci(worst);
}

void depth(Outcome& o) {
  DepthFitOptions opt;
  auto fit = [&](const ThetaSpec& s) {
    return quasi_depth_fit(s, default_depth_base_points(2), default_depth_gammas(4),
                           default_depth_lambdas(2, opt.smax), opt);
  };
  double worst = 0.0;
  const auto iso = fit(spec(kIso, 2));
  o.require(iso.lambda_depth == IntVector{0, 0} && iso.t == 0, "v_iso depth");
  worst = std::max(worst, iso.fit_residual);
  for (unsigned k : {1u, 2u}) {
    const auto g = fit(spec(kGen, k));
    o.require(g.lambda_depth == IntVector{static_cast<std::int64_t>(k), 0},
              "v_gen k=" + std::to_string(k));
    worst = std::max(worst, g.fit_residual);
  }
  o.require(worst < 1e-6, "fit residual");
  double translation = 0.0;
  for (unsigned k : {0u, 1u, 2u, 3u})
    for (std::size_t i = 0; i < kLambdas.size(); ++i) {
      const auto r = verify_translation_polynomial(spec(kGen, k), kLambdas[i], kMus[i], kPoints,
                                                   opts(1e-8));
      translation = std::max(translation, r.max_residual);
      o.require(r.passed, "translation k=" + std::to_string(k));
    }
  o.detail << "depths (0,0;0) and (k,0), fit residual " << sci(worst)
           << ", translation residual " << sci(translation);
}

void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> rank_pick(1, 2), radius_pick(0, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_even_form(rng, 2 * static_cast<std::size_t>(rank_pick(rng)));
    const std::int64_t radius = radius_pick(rng);
    IntMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i][j];
    const auto ps = enumerate_points(QuadraticForm::validate(m), radius);
    const auto want = oracle::box_scan(a, radius);
    bool same = ps.size() == want.size();
    for (std::size_t i = 0; same && i < ps.size(); ++i)
      same = IntVector(ps[i].begin(), ps[i].end()) == want[i] && ps.norm(i) == oracle::quad(a, want[i]);
    o.require(same, "enumeration trial " + std::to_string(trial));
  }

  // Coefficient map built from the box scan, then summed directly.
  const double eps = 1e-10;
  const std::vector<ThetaSpec> specs = {
      spec(kIso, 2), spec(kGen, 1), spec(kOrtho, 3),
      ThetaSpec::make(QuadraticForm::validate(IntMatrix{{2, 1}, {1, 2}}), {{1, 0}}, {1.0, 0.5 * I}, 2)};
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.7, 1.5), zr(-0.25, 0.25);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto& s = specs[i % specs.size()];
    const Complex tau(re(rng), im(rng));
    ComplexVector z(s.n());
    for (auto& zj : z) zj = Complex(zr(rng), zr(rng));
    const auto a = [&] {
      oracle::IntMat out(s.form.rank(), oracle::IntVec(s.form.rank()));
      for (std::size_t r = 0; r < s.form.rank(); ++r)
        for (std::size_t c = 0; c < s.form.rank(); ++c) out[r][c] = s.form.matrix()(r, c);
      return out;
    }();
    std::map<std::pair<std::int64_t, IntVector>, Complex> coeffs;
    for (const auto& m : oracle::box_scan(a, 40)) {
      IntVector nu;
      for (const auto& h : s.directions.vectors()) nu.push_back(oracle::dot_form(a, m, h));
      coeffs[{oracle::quad(a, m), nu}] += oracle::ipow(oracle::bilinear_c(a, s.v.v(), m), s.k);
    }
    Complex want = 0.0;
    for (const auto& [key, c] : coeffs) {
      Complex phase = tau * static_cast<double>(key.first);
      for (std::size_t j = 0; j < z.size(); ++j) phase += z[j] * static_cast<double>(key.second[j]);
      want += c * std::exp(kTwoPiI * phase);
    }
    const double err = std::abs(theta_eval(s, tau, z, eps) - want);
    worst = std::max(worst, err);
    o.require(err < 2 * eps, "eval point " + std::to_string(i));
  }
  o.detail << "50 forms exact, max |eval - oracle| " << sci(worst) << " (2 eps = " << sci(2 * eps)
           << ")";
}

void delta_identity(Outcome& o) {
  auto fact = [](unsigned n) {
    std::int64_t r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
  };
  std::size_t cases = 0;
  // Multiply through by 2^{-(t-2j)/2}: 2^j delta(j,t)/t! = 1/((t-2j)! j!).
  for (unsigned t = 0; t <= 12; ++t)
    for (unsigned j = 0; 2 * j <= t; ++j, ++cases)
      o.require(Rational(std::int64_t{1} << j) * delta_coeff(j, t) / Rational(fact(t)) ==
                    Rational(1, fact(t - 2 * j) * fact(j)),
                "t=" + std::to_string(t));
  o.detail << cases << " rational identities";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"modular law of theta (v_iso, k in {0,1,2,4}, 3 gammas, 8 points)", modular_theta},
      {"elliptic law of theta (v_iso, 3 lambdas, mu-independence)", elliptic_theta},
      {"modular and elliptic laws of Psi (v_ortho, k in {2,3,4})", psi_laws},
      {"generating series law (v_ortho, gamma=(1,0,4,1), T=6)", generating},
      {"congruence theta law (p=0 and p=(2,0,0,0), k in {0,1,2})", congruence},
      {"support condition (lmax=10, three vectors, k<=4)", support},
      {"spherical reconstruction of coefficients (v=(1,0,1,0), lmax=6)", reconstruction},
      {"quasi-Jacobi depth and translation polynomial", depth},
      {"oracle equivalence (enumeration and evaluation)", oracle_equivalence},
      {"delta rearrangement identity (t<=12)", delta_identity},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const Error& e) {
      o.pass = false;
      o.detail << " [" << error_name(e.code()) << ": " << e.what() << "]";
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
