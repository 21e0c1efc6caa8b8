#include "adrc/stability.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "adrc/format.hpp"

namespace adrc {

void LipschitzBounds::validate() const {
  const double all[] = {l_w,   l_w_x, l_w_u,  l_w_w0, l_dw,     l_dw_x, l_dw_u,
                        l_dw_w0, l_v, l_v_x,  l_v_u,  l_v_v0,   c_xr,   c_xr_dot,
                        c_w0,  c_w0_dot, c_v0, c_u,    l_h};
  for (double v : all) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("Lipschitz bounds must be finite and non-negative");
    }
  }
}

namespace {

Matrix extended_atilde(const NominalLinearModel& m, const Matrix& l) {
  const ExtendedModel ext = build_extended(m);
  if (l.rows() != ext.Abar.rows() || l.cols() != ext.Cbar.rows()) {
    throw std::invalid_argument("observer gain must be (n+k) x l");
  }
  return ext.Abar - l * ext.Cbar;
}

const Matrix& pinv_of(const NominalLinearModel& m) {
  if (m.B_pinv().size() == 0) pinv_tall(m.B());
  return m.B_pinv();
}

void check_law(const NominalLinearModel& m, const ErrorLaw& law) {
  if (law.K().rows() != m.n()) throw std::invalid_argument("error law dimension mismatch");
}

Matrix closed_loop_matrix(const NominalLinearModel& m, const ErrorLaw& law) {
  const Matrix bbp = m.B() * pinv_of(m);
  return m.A() + bbp * (law.K() - m.A());
}

}  // namespace

Matrix build_H(const NominalLinearModel& m, const ErrorLaw& law, const Matrix& l) {
  check_law(m, law);
  const int n = m.n();
  const int k = m.k();
  const Matrix atilde = extended_atilde(m, l);
  const Matrix bbp = m.B() * pinv_of(m);

  Matrix a_k_gamma(n, n + k);
  a_k_gamma << m.A() - law.K(), m.Gamma();

  Matrix h = Matrix::Zero(2 * n + k, 2 * n + k);
  h.topLeftCorner(n + k, n + k) = atilde;
  h.bottomLeftCorner(n, n + k) = -bbp * a_k_gamma;
  h.bottomRightCorner(n, n) = closed_loop_matrix(m, law);
  return h;
}

Matrix build_delta(const NominalLinearModel& m, const ErrorLaw& law, const Matrix& dw_dx,
                   const Matrix& dw_du) {
  check_law(m, law);
  const int n = m.n();
  const int k = m.k();
  if (dw_dx.rows() != k || dw_dx.cols() != n || dw_du.rows() != k || dw_du.cols() != m.m()) {
    throw std::invalid_argument("build_delta: Jacobian dimension mismatch");
  }
  const Matrix& bp = pinv_of(m);
  Matrix a_k_gamma(n, n + k);
  a_k_gamma << m.A() - law.K(), m.Gamma();

  Matrix delta = Matrix::Zero(2 * n + k, 2 * n + k);
  delta.block(n, 0, k, n + k) = dw_du * bp * a_k_gamma;
  delta.block(n, n + k, k, n) = dw_du * bp * (m.A() - law.K()) - dw_dx * m.A();
  return delta;
}

Matrix build_delta_bound(const NominalLinearModel& m, const ErrorLaw& law,
                         const LipschitzBounds& b, DeltaMode mode) {
  b.validate();
  const Matrix dw_dx = b.l_dw_x * Matrix::Identity(m.k(), m.n());
  const Matrix dw_du = b.l_dw_u * Matrix::Identity(m.k(), m.m());
  Matrix delta = build_delta(m, law, dw_dx, dw_du);
  if (mode == DeltaMode::Rectified) delta = delta.cwiseAbs();
  return delta;
}

Betas betas(const NominalLinearModel& m, const Matrix& l, const LipschitzBounds& b) {
  b.validate();
  const Matrix& bp = pinv_of(m);
  const double lpi = norm2(l * m.Pi());
  Betas out;
  out.beta0 = b.l_dw_x * norm2(m.Gamma()) + b.l_dw_u * norm2(bp * m.Gamma()) +
              norm2(m.B_tilde() * m.Gamma());
  out.beta1 = b.l_v_x * lpi + b.l_w_x * out.beta0;
  out.beta2 = b.l_v_u * lpi + b.l_dw_x * norm2(m.B()) + b.l_w_u * out.beta0;
  return out;
}

StabilityCertificate check_theorem2(const NominalLinearModel& m, const ErrorLaw& law,
                                    const Matrix& l, const LipschitzBounds& b,
                                    const Theorem2Options& options) {
  check_law(m, law);
  const int d = 2 * m.n() + m.k();
  const Matrix mm = options.M ? *options.M : Matrix::Identity(d, d);
  if (mm.rows() != d || mm.cols() != d) throw std::invalid_argument("M dimension mismatch");

  StabilityCertificate cert;
  const Betas beta = betas(m, l, b);
  cert.beta0 = beta.beta0;
  cert.beta1 = beta.beta1;
  cert.beta2 = beta.beta2;
  cert.atilde_hurwitz = is_hurwitz(extended_atilde(m, l));
  cert.acl_hurwitz = is_hurwitz(closed_loop_matrix(m, law));
  if (!cert.atilde_hurwitz || !cert.acl_hurwitz) {
    cert.condition_min_eig = -std::numeric_limits<double>::infinity();
    return cert;
  }

  const Matrix h = build_H(m, law, l);
  cert.N = solve_lyapunov(h, mm);
  cert.sigma_max_N = norm2(cert.N);

  Matrix delta;
  if (options.delta_override) {
    delta = *options.delta_override;
    if (delta.rows() != d || delta.cols() != d) {
      throw std::invalid_argument("delta override dimension mismatch");
    }
  } else {
    delta = build_delta_bound(m, law, b, options.delta_mode);
  }

  Matrix s = 2.0 * mm - delta.transpose() * cert.N - cert.N * delta -
             2.0 * cert.beta1 * cert.sigma_max_N * Matrix::Identity(d, d);
  s = 0.5 * (s + s.transpose());
  cert.condition_min_eig = sym_min_eig(s);
  cert.satisfied = cert.condition_min_eig > 0.0;
  if (cert.satisfied) cert.ultimate_radius = ultimate_bound(cert, m, l, b);
  return cert;
}

SweepResult sweep_certificates(const CertificateFamily& family, const std::vector<double>& grid,
                               const Theorem2Options& options) {
  if (grid.empty()) throw std::invalid_argument("sweep_certificates: empty grid");
  SweepResult out;
  out.entries.reserve(grid.size());
  for (double k : grid) {
    const CertificateProblem p = family(k);
    out.entries.push_back({k, check_theorem2(p.model, p.law, p.L, p.bounds, options)});
  }

  std::size_t best_start = 0, best_len = 0;
  for (std::size_t i = 0; i < out.entries.size();) {
    if (!out.entries[i].certificate.satisfied) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < out.entries.size() && out.entries[j].certificate.satisfied) ++j;
    if (j - i > best_len) {
      best_start = i;
      best_len = j - i;
    }
    i = j;
  }
  if (best_len > 0) {
    out.satisfied_interval = std::make_pair(out.entries[best_start].parameter,
                                            out.entries[best_start + best_len - 1].parameter);
  }
  return out;
}

double lemma1_bound(const Matrix& atilde, const Matrix& q, const Matrix& l, const Matrix& pi,
                    double c_wdot, double c_v) {
  if (!is_hurwitz(atilde)) throw NumericalError("lemma1_bound: Atilde is not Hurwitz");
  const Matrix p = solve_lyapunov(atilde, q);
  return norm2(p) / sigma_extrema(q).min * (c_wdot + c_v * norm2(l * pi));
}

double theorem1_xi_factor(const NominalLinearModel& m, double l_h, const Matrix& l,
                          const Matrix& p, const Matrix& q, double c_wdot, double c_v) {
  Matrix a_gamma(m.n(), m.n() + m.k());
  a_gamma << m.A(), m.Gamma();
  const double observer = norm2(p) / sigma_extrema(q).min * (c_wdot + c_v * norm2(l * m.Pi()));
  return observer * (l_h + norm2(a_gamma));
}

double ultimate_bound_constant(const NominalLinearModel& m, const Matrix& l,
                               const LipschitzBounds& b, const Betas& beta) {
  const Matrix& bp = pinv_of(m);
  const Matrix& bt = m.B_tilde();
  const double lpi = norm2(l * m.Pi());
  return b.c_xr * (beta.beta1 + b.l_dw_x * norm2(m.A()) + b.l_dw_u * norm2(bp * m.A()) +
                   norm2(bt * m.A())) +
         b.c_xr_dot * (b.l_dw_u * norm2(bp) + norm2(bt)) + b.c_u * beta.beta2 +
         b.c_w0 * b.l_w_w0 * beta.beta0 + b.c_w0_dot * b.l_dw_w0 +
         (b.l_v + b.c_v0 * b.l_v_v0) * lpi + b.l_w * beta.beta0 + b.l_dw;
}

double ultimate_bound(const StabilityCertificate& cert, const NominalLinearModel& m,
                      const Matrix& l, const LipschitzBounds& b) {
  if (!cert.satisfied || !(cert.condition_min_eig > 0.0)) {
    throw NumericalError("no ultimate bound available");
  }
  const Betas beta{cert.beta0, cert.beta1, cert.beta2};
  return 2.0 * cert.sigma_max_N * ultimate_bound_constant(m, l, b, beta) /
         cert.condition_min_eig;
}

std::string certificate_report(const StabilityCertificate& cert) {
  std::ostringstream os;
  os << "atilde_hurwitz=" << (cert.atilde_hurwitz ? "true" : "false") << '\n'
     << "acl_hurwitz=" << (cert.acl_hurwitz ? "true" : "false") << '\n'
     << "beta0=" << format_double(cert.beta0) << '\n'
     << "beta1=" << format_double(cert.beta1) << '\n'
     << "beta2=" << format_double(cert.beta2) << '\n'
     << "min_eig=" << format_double(cert.condition_min_eig) << '\n'
     << "satisfied=" << (cert.satisfied ? "true" : "false") << '\n'
     << "ultimate_radius="
     << (cert.ultimate_radius ? format_double(*cert.ultimate_radius) : std::string("none"))
     << '\n';
  return os.str();
}

LipschitzBounds example1_bounds(double k) {
  LipschitzBounds b;
  b.l_w_x = 0.2;
  b.l_dw_x = 0.2;
  b.l_w_u = 0.3;
  b.l_dw_u = 0.3;
  b.l_w_w0 = 1.0;
  b.l_dw_w0 = 1.0;
  b.c_w0 = 0.1;
  b.c_w0_dot = 0.1;
  b.l_v_v0 = 1.0;
  b.c_v0 = 0.1;
  b.c_u = 5.0;
  b.c_xr = 1.0;
  b.c_xr_dot = k;
  b.l_h = k;
  return b;
}

CertificateProblem example1_problem(double k) {
  return CertificateProblem{first_order_model(), ErrorLaw(Matrix::Constant(1, 1, -k)),
                            example1_gain(k).L(), example1_bounds(k)};
}

}  // namespace adrc
