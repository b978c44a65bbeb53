#include "shiftsplit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "shiftsplit/errors.hpp"

namespace shiftsplit {

namespace {

void require_desk_scale(const SaddleSystem& sys, const char* who) {
  if (sys.order() > kDeskScale) {
    throw ConfigError(std::string(who) + ": order " +
                      std::to_string(sys.order()) + " exceeds desk scale");
  }
}

std::string format_alpha(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", alpha);
  return buf;
}

}  // namespace

DenseMatrix preconditioned_matrix(const SaddleSystem& sys, PrecondKind kind,
                                  double alpha) {
  require_desk_scale(sys, "preconditioned_matrix");
  InnerSpec inner;
  inner.policy = InnerPolicy::direct;
  const Preconditioner p(sys, PrecondSpec{kind, alpha, inner});
  const DenseMatrix a = dense_block_matrix(sys);
  const std::size_t order = sys.order();
  DenseMatrix out(order, order);
  Vector z(order);
  for (std::size_t j = 0; j < order; ++j) {
    p.apply(a.column(j), z);
    out.set_column(j, z);
  }
  return out;
}

SpectrumReport preconditioned_spectrum(const SaddleSystem& sys,
                                       PrecondKind kind, double alpha) {
  SpectrumReport rep;
  rep.label = "P_" + std::string(to_string(kind)) + "^-1 A";
  rep.alpha = alpha;
  rep.eigenvalues = eigvals(preconditioned_matrix(sys, kind, alpha));
  return rep;
}

SpectrumReport saddle_spectrum(const SaddleSystem& sys) {
  require_desk_scale(sys, "saddle_spectrum");
  SpectrumReport rep;
  rep.label = "A";
  rep.alpha = 0.0;
  rep.eigenvalues = eigvals(dense_block_matrix(sys));
  return rep;
}

bool in_half_disk_region(const ComplexList& eigenvalues, double tol) {
  for (const Complex& l : eigenvalues) {
    if (!(l.real() > -tol)) return false;
    if (!(std::abs(l) < 1.0 + tol)) return false;
    if (!(std::abs(l - 0.5) <= 0.5 + tol)) return false;
  }
  return true;
}

Thm3Result verify_thm3(const SaddleSystem& sys, double alpha, double tol) {
  Thm3Result res;
  res.report = preconditioned_spectrum(sys, PrecondKind::ss, alpha);
  res.holds = in_half_disk_region(res.report.eigenvalues, tol);
  res.report.containment = DiskContainment{Complex(0.5, 0.0), 0.5, res.holds};
  return res;
}

Thm4Result verify_thm4(const SaddleSystem& sys, double alpha, double tol) {
  require_desk_scale(sys, "verify_thm4");
  const std::size_t n = sys.n();
  const std::size_t m = sys.m();

  InnerSpec inner;
  inner.policy = InnerPolicy::direct;
  const Preconditioner p(sys, PrecondSpec{PrecondKind::rss, alpha, inner});

  Thm4Result res;
  Vector e(n + m, 0.0), col(n + m), z(n + m);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    block_apply(sys, e, col);
    p.apply(col, z);
    for (std::size_t i = 0; i < n + m; ++i) {
      const double expect = i == j ? 1.0 : 0.0;
      res.identity_block_error =
          std::max(res.identity_block_error, std::abs(z[i] - expect));
    }
    e[j] = 0.0;
  }
  res.multiplicity_ok = res.identity_block_error <= tol;

  // (1/alpha) C (A + (1/alpha) B^T C)^{-1} B^T, column by column.
  const SchurOperator schur(sys, alpha, SchurOperator::Variant::unshifted);
  const LuFactorization lu(schur.assemble_dense());
  DenseMatrix secondary(m, m);
  Vector em(m, 0.0), btcol(n), cz(m);
  for (std::size_t j = 0; j < m; ++j) {
    em[j] = 1.0;
    sys.Bt().multiply(em, btcol);
    const Vector w = lu.solve(btcol);
    sys.C().multiply(w, cz);
    for (auto& v : cz) v /= alpha;
    secondary.set_column(j, cz);
    em[j] = 0.0;
  }
  res.secondary_eigs = eigvals(secondary);
  return res;
}

ComplexList sorted_spectrum(ComplexList eigenvalues) {
  std::sort(eigenvalues.begin(), eigenvalues.end(),
            [](const Complex& a, const Complex& b) {
              return a.real() != b.real() ? a.real() < b.real()
                                          : a.imag() < b.imag();
            });
  return eigenvalues;
}

double multiset_distance(const ComplexList& a, const ComplexList& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const ComplexList sa = sorted_spectrum(a);
  const ComplexList sb = sorted_spectrum(b);
  std::vector<bool> used(sb.size(), false);
  double worst = 0.0;
  for (const Complex& x : sa) {
    std::size_t best = sb.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - sb[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

void export_spectrum_csv(const SpectrumReport& report, std::ostream& out) {
  out << "# " << report.label << ',' << format_alpha(report.alpha) << '\n';
  char buf[96];
  for (const Complex& l : sorted_spectrum(report.eigenvalues)) {
    // Print +0 rather than -0.
    const double re = l.real() == 0.0 ? 0.0 : l.real();
    const double im = l.imag() == 0.0 ? 0.0 : l.imag();
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", re, im);
    out << buf << '\n';
  }
}

void export_spectrum_csv(const SpectrumReport& report,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  export_spectrum_csv(report, out);
  if (!out) throw Error("write failed for " + path.string());
}

SpectrumReport read_spectrum_csv(std::istream& in) {
  SpectrumReport rep;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw ParseError(1, "expected '# label,alpha' header");
  }
  ++line_no;
  const auto comma = line.rfind(',');
  if (comma == std::string::npos) throw ParseError(1, "header lacks alpha");
  rep.label = line.substr(2, comma - 2);
  try {
    rep.alpha = std::stod(line.substr(comma + 1));
  } catch (const std::exception&) {
    throw ParseError(1, "malformed alpha");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    double re = 0.0, im = 0.0;
    char sep = 0;
    if (!(row >> re >> sep >> im) || sep != ',') {
      throw ParseError(line_no, "expected 're,im'");
    }
    rep.eigenvalues.emplace_back(re, im);
  }
  return rep;
}

SpectrumReport read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_spectrum_csv(in);
}

}  // namespace shiftsplit
