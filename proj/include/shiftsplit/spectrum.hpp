#ifndef SHIFTSPLIT_SPECTRUM_HPP
#define SHIFTSPLIT_SPECTRUM_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "shiftsplit/dense.hpp"
#include "shiftsplit/preconditioners.hpp"
#include "shiftsplit/saddle.hpp"

namespace shiftsplit {

struct DiskContainment {
  Complex center;
  double radius = 0.0;
  bool all_inside = false;
};

struct SpectrumReport {
  std::string label;
  double alpha = 0.0;
  ComplexList eigenvalues;
  std::optional<DiskContainment> containment;
};

/// Dense P^{-1} A_s assembled column by column with exact (direct) applies.
DenseMatrix preconditioned_matrix(const SaddleSystem& sys, PrecondKind kind,
                                  double alpha);

/// Spectrum of P^{-1} A_s. For SS this is (alpha I + A_s)^{-1} A_s.
SpectrumReport preconditioned_spectrum(const SaddleSystem& sys,
                                       PrecondKind kind, double alpha);

/// Spectrum of the unpreconditioned saddle matrix.
SpectrumReport saddle_spectrum(const SaddleSystem& sys);

/// Re(l) > -tol, |l| < 1 + tol and |l - 1/2| <= 1/2 + tol for every l.
bool in_half_disk_region(const ComplexList& eigenvalues, double tol = 1e-8);

struct Thm3Result {
  bool holds = false;
  SpectrumReport report;
};

/// Eigenvalues of (alpha I + A_s)^{-1} A_s lie in the disk of radius 1/2
/// centred at 1/2 (hence positive stable with modulus below one).
Thm3Result verify_thm3(const SaddleSystem& sys, double alpha, double tol = 1e-8);

struct Thm4Result {
  bool multiplicity_ok = false;
  /// Largest deviation of P_RSS^{-1} A_s e_j from e_j over j < n.
  double identity_block_error = 0.0;
  /// Spectrum of (1/alpha) C (A + (1/alpha) B^T C)^{-1} B^T.
  ComplexList secondary_eigs;
};

/// Structural check of the eigenvalue 1 of multiplicity n for
/// P_RSS^{-1} A_s plus the remaining m eigenvalues.
Thm4Result verify_thm4(const SaddleSystem& sys, double alpha, double tol = 1e-10);

/// Sorted by (re, im).
ComplexList sorted_spectrum(ComplexList eigenvalues);

/// Greedy nearest matching of two multisets; returns the largest distance
/// between matched pairs, or +inf when the sizes differ.
double multiset_distance(const ComplexList& a, const ComplexList& b);

/// `# label,alpha` followed by one `re,im` line per eigenvalue in (re, im)
/// order.
void export_spectrum_csv(const SpectrumReport& report,
                         const std::filesystem::path& path);
void export_spectrum_csv(const SpectrumReport& report, std::ostream& out);
SpectrumReport read_spectrum_csv(const std::filesystem::path& path);
SpectrumReport read_spectrum_csv(std::istream& in);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_SPECTRUM_HPP
