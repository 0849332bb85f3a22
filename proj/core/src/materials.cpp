#include "phonoscat/materials.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phonoscat/errors.hpp"

#ifndef PHONOSCAT_SOURCE_DATA_DIR
#define PHONOSCAT_SOURCE_DATA_DIR "data"
#endif
#ifndef PHONOSCAT_INSTALL_DATA_DIR
#define PHONOSCAT_INSTALL_DATA_DIR "share/phonoscat"
#endif

namespace phonoscat {

namespace {

bool is_rotation(const Mat3& r) {
  const Mat3 rtr = transpose(r) * r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (std::abs(rtr[i][j] - (i == j ? 1.0 : 0.0)) > 1e-12) return false;
  return std::abs(det(r) - 1.0) <= 1e-12;
}

template <typename M>
bool is_symmetric(const M& m, double rel_tol) {
  const double scale = std::max(max_abs(m), 1e-300);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (std::abs(m[i][j] - m[j][i]) > rel_tol * scale) return false;
  return true;
}

[[noreturn]] void fail(const std::string& record, const std::string& what) {
  throw ValidationError("material '" + record + "': " + what);
}

template <std::size_t R, std::size_t C>
std::array<std::array<double, C>, R> read_matrix(const nlohmann::json& j,
                                                 const char* key,
                                                 const std::string& record) {
  if (!j.contains(key)) fail(record, std::string("missing key '") + key + "'");
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != R * C)
    fail(record, std::string("'") + key + "' must be an array of " +
                     std::to_string(R * C) + " numbers");
  std::array<std::array<double, C>, R> m{};
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t k = 0; k < C; ++k) {
      const auto& v = arr[i * C + k];
      if (!v.is_number())
        fail(record, std::string("'") + key + "' entry " +
                         std::to_string(i * C + k) + " is not a number");
      m[i][k] = v.get<double>();
    }
  return m;
}

template <typename M>
nlohmann::json flatten(const M& m) {
  auto out = nlohmann::json::array();
  for (const auto& row : m)
    for (double x : row) out.push_back(x);
  return out;
}

}  // namespace

Orientation::Orientation(const Mat3& r) : r_(r) {
  if (!is_rotation(r))
    throw ValidationError("orientation is not a proper orthonormal rotation");
}

Orientation Orientation::about(const Vec3& axis, double angle_rad) {
  if (norm(axis) == 0.0) throw ValidationError("rotation axis is zero");
  return Orientation(axis_angle(axis, angle_rad));
}

void MaterialSpec::validate() const {
  const std::string& n = name.empty() ? std::string("<unnamed>") : name;
  if (!(density > 0.0) || !std::isfinite(density)) fail(n, "density must be > 0");
  for (const auto& row : stiffness)
    for (double x : row)
      if (!std::isfinite(x)) fail(n, "stiffness has non-finite entries");
  for (const auto& row : piezo)
    for (double x : row)
      if (!std::isfinite(x)) fail(n, "piezo tensor has non-finite entries");
  if (!is_symmetric(stiffness, 1e-9)) fail(n, "stiffness C is not symmetric");
  if (!is_positive_definite(stiffness))
    fail(n, "stiffness C is not positive definite");
  if (!is_symmetric(permittivity, 1e-9))
    fail(n, "permittivity eps_r is not symmetric");
  if (!is_positive_definite(permittivity))
    fail(n, "permittivity eps_r is not positive definite");
  if (isotropic && !is_isotropic(stiffness))
    fail(n, "flagged isotropic but C11 - C12 != 2 C44 or has anisotropic terms");
}

MaterialSpec make_isotropic(std::string name, double density, double lambda,
                            double mu, double relative_permittivity) {
  MaterialSpec m;
  m.name = std::move(name);
  m.density = density;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m.stiffness[i][j] = lambda;
    m.stiffness[i][i] = lambda + 2.0 * mu;
    m.stiffness[i + 3][i + 3] = mu;
    m.permittivity[i][i] = relative_permittivity;
  }
  m.isotropic = true;
  return m;
}

bool is_isotropic(const Mat6& c, double rel_tol) {
  const double tol = rel_tol * std::max(max_abs(c), 1e-300);
  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  const double c11 = c[0][0], c12 = c[0][1], c44 = c[3][3];
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double expect = 0.0;
      if (i < 3 && j < 3) expect = (i == j) ? c11 : c12;
      else if (i == j) expect = c44;
      if (!near(c[i][j], expect)) return false;
    }
  return near(c11 - c12, 2.0 * c44);
}

Mat6 stress_bond_matrix(const Mat3& r) {
  Mat6 m{};
  for (std::size_t I = 0; I < 6; ++I) {
    const auto [i, j] = voigt_pair(I);
    for (std::size_t J = 0; J < 6; ++J) {
      const auto [a, b] = voigt_pair(J);
      double v = r[i][a] * r[j][b];
      if (a != b) v += r[i][b] * r[j][a];
      m[I][J] = v;
    }
  }
  return m;
}

Mat6 strain_bond_matrix(const Mat3& r) {
  Mat6 n{};
  for (std::size_t I = 0; I < 6; ++I) {
    const auto [i, j] = voigt_pair(I);
    const double out_factor = (i != j) ? 2.0 : 1.0;
    for (std::size_t J = 0; J < 6; ++J) {
      const auto [a, b] = voigt_pair(J);
      double v = r[i][a] * r[j][b];
      if (a != b) v = 0.5 * (v + r[i][b] * r[j][a]);
      n[I][J] = out_factor * v;
    }
  }
  return n;
}

Mat6 rotate_stiffness(const Mat6& c, const Orientation& r) {
  const Mat6 m = stress_bond_matrix(r.matrix());
  Mat6 out = m * c * transpose(m);
  // Restore exact symmetry lost to round-off.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      out[i][j] = out[j][i] = 0.5 * (out[i][j] + out[j][i]);
  return out;
}

Mat3x6 rotate_piezo(const Mat3x6& d, const Orientation& r) {
  const Mat3& rm = r.matrix();
  const Mat6 n = strain_bond_matrix(rm);
  Mat3x6 rd{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t J = 0; J < 6; ++J)
      for (std::size_t a = 0; a < 3; ++a) rd[i][J] += rm[i][a] * d[a][J];
  Mat3x6 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t I = 0; I < 6; ++I)
      for (std::size_t J = 0; J < 6; ++J) out[i][I] += rd[i][J] * n[I][J];
  return out;
}

Mat3 rotate_permittivity(const Mat3& eps, const Orientation& r) {
  return r.matrix() * eps * transpose(r.matrix());
}

MaterialSpec rotated(const MaterialSpec& m, const Orientation& r) {
  MaterialSpec out = m;
  out.stiffness = rotate_stiffness(m.stiffness, r);
  out.piezo = rotate_piezo(m.piezo, r);
  out.permittivity = rotate_permittivity(m.permittivity, r);
  return out;
}

double stiffness_component(const Mat6& c, std::size_t i, std::size_t j,
                           std::size_t k, std::size_t l) {
  return c[voigt_index(i, j)][voigt_index(k, l)];
}

double piezo_component(const Mat3x6& d, std::size_t i, std::size_t j,
                       std::size_t k) {
  const double v = d[i][voigt_index(j, k)];
  return j == k ? v : 0.5 * v;
}

MaterialDatabase::MaterialDatabase(std::vector<MaterialSpec> records) {
  for (auto& r : records) add(std::move(r));
}

const MaterialSpec* MaterialDatabase::find(std::string_view name) const {
  for (const auto& r : records_)
    if (r.name == name) return &r;
  return nullptr;
}

const MaterialSpec& MaterialDatabase::at(std::string_view name) const {
  if (const auto* m = find(name)) return *m;
  throw ValidationError("unknown material '" + std::string(name) + "'");
}

void MaterialDatabase::add(MaterialSpec m) {
  m.validate();
  if (find(m.name)) fail(m.name, "duplicate record name");
  records_.push_back(std::move(m));
}

MaterialDatabase parse_materials(std::string_view json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("material database is not valid JSON: ") +
                          e.what());
  }
  if (!root.is_array())
    throw ValidationError("material database must be a JSON array of records");

  MaterialDatabase db;
  std::size_t index = 0;
  for (const auto& rec : root) {
    const std::string label =
        (rec.is_object() && rec.contains("name") && rec["name"].is_string())
            ? rec["name"].get<std::string>()
            : "#" + std::to_string(index);
    if (!rec.is_object()) fail(label, "record is not an object");
    if (!rec.contains("name") || !rec["name"].is_string())
      fail(label, "missing string key 'name'");
    if (!rec.contains("rho") || !rec["rho"].is_number())
      fail(label, "missing numeric key 'rho'");

    MaterialSpec m;
    m.name = label;
    m.density = rec["rho"].get<double>();
    m.stiffness = read_matrix<6, 6>(rec, "C", label);
    m.piezo = read_matrix<3, 6>(rec, "d", label);
    m.permittivity = read_matrix<3, 3>(rec, "eps_r", label);
    if (rec.contains("isotropic")) {
      if (!rec["isotropic"].is_boolean()) fail(label, "'isotropic' must be a boolean");
      m.isotropic = rec["isotropic"].get<bool>();
    }
    db.add(std::move(m));
    ++index;
  }
  return db;
}

MaterialDatabase load_materials(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open material database " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_materials(buf.str());
}

std::string serialize_materials(const MaterialDatabase& db) {
  auto root = nlohmann::json::array();
  for (const auto& m : db.records()) {
    nlohmann::json rec;
    rec["name"] = m.name;
    rec["rho"] = m.density;
    rec["C"] = flatten(m.stiffness);
    rec["d"] = flatten(m.piezo);
    rec["eps_r"] = flatten(m.permittivity);
    if (m.isotropic) rec["isotropic"] = true;
    root.push_back(std::move(rec));
  }
  return root.dump(2) + "\n";
}

void save_materials(const MaterialDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write material database " + path.string());
  out << serialize_materials(db);
}

std::filesystem::path default_materials_path() {
  if (const char* env = std::getenv("PHONOSCAT_MATERIALS"); env && *env)
    return env;
  const std::filesystem::path in_tree =
      std::filesystem::path(PHONOSCAT_SOURCE_DATA_DIR) / "materials.json";
  if (std::filesystem::exists(in_tree)) return in_tree;
  return std::filesystem::path(PHONOSCAT_INSTALL_DATA_DIR) / "materials.json";
}

}  // namespace phonoscat
