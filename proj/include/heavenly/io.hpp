#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "heavenly/families.hpp"
#include "heavenly/pde.hpp"

namespace heavenly::io {

/// On-disk solution document: raw family parameters plus the derived
/// exponent table. Re-deriving the table from the parameters must reproduce
/// the stored values to 1e-12.
struct SolutionDocument {
  int schema_version = 1;
  families::FamilyId family;
  families::FamilyParams params;
  ExpSumPotential potential;
  std::vector<std::string> provenance;
};

std::string to_json(const SolutionDocument& doc);
SolutionDocument document_from_json(const std::string& text);

void save_document(const SolutionDocument& doc, const std::filesystem::path& path);
SolutionDocument load_document(const std::filesystem::path& path);

/// Largest relative mismatch between the stored exponent table and the table
/// re-derived from the raw parameters.
double rederive_mismatch(const SolutionDocument& doc);

struct RunConfig {
  double tol_residual = 1e-10;
  double tol_ricci = 1e-4;
  double tol_determinant = 1e-10;
  double tol_imag = 1e-8;
  double fd_step = 1e-3;
  std::uint64_t seed = 20240915;
  int points = 100;
  double box = 1.0;  // coordinate sampling bound
  int workers = 1;

  void validate() const;
};

RunConfig config_from_json(const std::string& text);
/// Overlays HEAVENLY_SEED and HEAVENLY_TOL_RESIDUAL when set.
void apply_env(RunConfig& cfg);

/// Fixed-format decimal that round-trips IEEE-754 doubles.
std::string format_double(double v);

}  // namespace heavenly::io
