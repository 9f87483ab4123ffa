#include "nag/poly_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nag/json_writer.hpp"

namespace nag {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw InputError("write failed: " + path);
}

PolySystem parse_system_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("polynomial JSON parse error: ") + e.what());
  }
  if (!j.contains("field") || !j.contains("n") || !j.contains("degrees") || !j.contains("terms"))
    throw InputError("polynomial JSON missing one of: field, n, degrees, terms");

  const std::string field_s = j["field"].get<std::string>();
  Field field;
  if (field_s == "real")
    field = Field::Real;
  else if (field_s == "complex")
    field = Field::Complex;
  else
    throw InputError("field must be \"real\" or \"complex\", got " + field_s);

  const int n = j["n"].get<int>();
  if (n < 1 || n > 16) throw InputError("n out of range [1,16]");

  std::vector<int> degrees = j["degrees"].get<std::vector<int>>();
  if (degrees.empty()) throw InputError("degrees must be nonempty");
  std::vector<HomogeneousPoly> comps;
  for (int d : degrees) {
    if (d < 1 || d > 24) throw InputError("degree out of range [1,24]");
    comps.emplace_back(n + 1, d);
  }

  for (const auto& term : j["terms"]) {
    if (!term.is_array() || term.size() != 4) throw InputError("term must be [i, alpha, re, im]");
    const int i = term[0].get<int>();
    if (i < 0 || i >= static_cast<int>(comps.size())) throw InputError("term component index out of range");
    std::vector<int> alpha = term[1].get<std::vector<int>>();
    if (static_cast<int>(alpha.size()) != n + 1) throw InputError("term exponent length must be n+1");
    const double re = term[2].get<double>();
    const double im = term[3].get<double>();
    if (field == Field::Real && im != 0.0) throw InputError("real field terms must have im = 0");
    comps[static_cast<std::size_t>(i)].set_coefficient(alpha, Complex(re, im));
  }
  return PolySystem(field, std::move(comps));
}

PolySystem load_system(const std::string& path) { return parse_system_json(read_file(path)); }

std::string system_to_json(const PolySystem& f) {
  JsonWriter w;
  w.begin_object();
  w.kv("field", f.field() == Field::Real ? "real" : "complex");
  w.kv("n", f.n());
  w.key("degrees").begin_array();
  for (int d : f.degrees()) w.value(d);
  w.end_array();
  w.key("terms").begin_array();
  for (int i = 0; i < f.q(); ++i) {
    const auto& p = f.component(i);
    auto table = MonoTable::get(p.nvars(), std::max(p.degree(), 1));
    const auto& exps = table->exps(p.degree());
    for (std::int64_t r = 0; r < p.coefficients().size(); ++r) {
      const Complex c = p.coefficients()[r];
      if (c == Complex(0.0, 0.0)) continue;
      w.begin_array();
      w.value(i);
      w.begin_array();
      for (int v = 0; v < p.nvars(); ++v)
        w.value(exps[static_cast<std::size_t>(r) * p.nvars() + v]);
      w.end_array();
      w.value(c.real());
      w.value(c.imag());
      w.end_array();
    }
  }
  w.end_array();
  w.end_object();
  return w.str();
}

void save_system(const PolySystem& f, const std::string& path) {
  write_file(path, system_to_json(f) + "\n");
}

}  // namespace nag
