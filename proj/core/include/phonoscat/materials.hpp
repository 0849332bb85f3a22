#pragma once

// Material tensors in Voigt notation.
//
// Conventions (fixed for the whole library):
//  * Voigt order is (11, 22, 33, 23, 13, 12).
//  * Strain vectors use engineering shear (gamma_23 = 2 S_23, ...).
//  * Stiffness C maps engineering strain to stress, units Pa.
//  * Piezoelectric coefficients are in strain form, d_{iJ} in m/V, so that
//    the induced engineering strain is S_J = d_{iJ} E_i. For shear slots
//    d_{iJ} = 2 d_{ijk}; for normal slots d_{iJ} = d_{ijk}.
//  * An Orientation R maps crystal-frame vectors to the lab frame,
//    v_lab = R v_crystal.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonoscat/linalg.hpp"

namespace phonoscat {

/// Proper rotation matrix. Construction validates R^T R = I and det R = +1
/// entry-wise to 1e-12.
class Orientation {
 public:
  Orientation() : r_(identity3()) {}
  explicit Orientation(const Mat3& r);

  static Orientation about(const Vec3& axis, double angle_rad);

  const Mat3& matrix() const { return r_; }

  /// this applied after `first`.
  Orientation compose(const Orientation& first) const {
    return Orientation(r_ * first.r_);
  }

 private:
  Mat3 r_;
};

struct MaterialSpec {
  std::string name;
  double density = 0.0;   // kg/m^3
  Mat6 stiffness{};       // Pa
  Mat3x6 piezo{};         // m/V, strain form
  Mat3 permittivity{};    // relative
  bool isotropic = false; // declared flag; checked by validate()

  /// Throws ValidationError naming the record when an invariant fails.
  void validate() const;

  double mean_relative_permittivity() const {
    return (permittivity[0][0] + permittivity[1][1] + permittivity[2][2]) / 3.0;
  }
};

/// Isotropic elastic solid from Lame constants; zero piezoelectricity.
MaterialSpec make_isotropic(std::string name, double density, double lambda,
                            double mu, double relative_permittivity = 1.0);

/// C11 = C22 = C33, C12 = C13 = C23, C44 = C55 = C66, C11 - C12 = 2 C44,
/// every other entry zero, all relative to max |C_IJ|.
bool is_isotropic(const Mat6& c, double rel_tol = 1e-9);

/// 6x6 Bond matrix acting on stress-form Voigt vectors: T' = M T.
Mat6 stress_bond_matrix(const Mat3& r);
/// 6x6 Bond matrix acting on engineering-strain Voigt vectors: S' = N S.
Mat6 strain_bond_matrix(const Mat3& r);

/// C' = M C M^T; c'_ijkl = R_ia R_jb R_kc R_ld c_abcd.
Mat6 rotate_stiffness(const Mat6& c, const Orientation& r);
/// d' = R d N^T; d'_ijk = R_ia R_jb R_kc d_abc.
Mat3x6 rotate_piezo(const Mat3x6& d, const Orientation& r);
Mat3 rotate_permittivity(const Mat3& eps, const Orientation& r);

/// All tensors of `m` carried into the lab frame.
MaterialSpec rotated(const MaterialSpec& m, const Orientation& r);

/// Full-index accessors, handy for contractions written in tensor form.
double stiffness_component(const Mat6& c, std::size_t i, std::size_t j,
                           std::size_t k, std::size_t l);
double piezo_component(const Mat3x6& d, std::size_t i, std::size_t j,
                       std::size_t k);

class MaterialDatabase {
 public:
  MaterialDatabase() = default;
  explicit MaterialDatabase(std::vector<MaterialSpec> records);

  const std::vector<MaterialSpec>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  const MaterialSpec* find(std::string_view name) const;
  /// Throws ValidationError when absent.
  const MaterialSpec& at(std::string_view name) const;

  void add(MaterialSpec m);

 private:
  std::vector<MaterialSpec> records_;
};

/// Parses the JSON array-of-records format:
///   [{"name": ..., "rho": ..., "C": [36], "d": [18], "eps_r": [9],
///     "isotropic": optional bool}, ...]
/// Errors name the offending record.
MaterialDatabase parse_materials(std::string_view json_text);
MaterialDatabase load_materials(const std::filesystem::path& path);

std::string serialize_materials(const MaterialDatabase& db);
void save_materials(const MaterialDatabase& db,
                    const std::filesystem::path& path);

/// $PHONOSCAT_MATERIALS when set, else the database installed with the
/// library.
std::filesystem::path default_materials_path();

}  // namespace phonoscat
