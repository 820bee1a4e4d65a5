#include "strat/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "strat/errors.hpp"

namespace strat {

using nlohmann::ordered_json;

RelativeSplit Bundle::split() const {
  if (!split_base) return RelativeSplit::of(tower);
  RelativeSplit s;
  s.base_vars = *split_base;
  for (const auto& v : tower.vars())
    if (std::find(s.base_vars.begin(), s.base_vars.end(), v) == s.base_vars.end())
      s.fiber_vars.push_back(v);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

uint64_t fnv1a64(const std::string& data) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(const std::string& data) {
  static const char* hex = "0123456789abcdef";
  uint64_t h = fnv1a64(data);
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = hex[h & 0xf];
    h >>= 4;
  }
  return s;
}

namespace {

[[noreturn]] void schema_fail(const std::string& pointer, const std::string& msg) {
  fail(ErrorKind::Parse, "schema violation at " + pointer + ": " + msg);
}

std::vector<std::string> string_list(const ordered_json& j, const std::string& pointer) {
  if (!j.is_array()) schema_fail(pointer, "expected an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) schema_fail(pointer + "/" + std::to_string(i), "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

PolyMat parse_matrix(const ordered_json& j, const std::string& pointer, uint16_t p,
                     const std::vector<std::string>& vars, size_t rank) {
  if (!j.is_array() || j.size() != rank)
    schema_fail(pointer, "expected " + std::to_string(rank) + " rows");
  PolyMat m(rank, rank, p, vars);
  for (size_t r = 0; r < rank; ++r) {
    if (!j[r].is_array() || j[r].size() != rank)
      schema_fail(pointer + "/" + std::to_string(r),
                  "expected " + std::to_string(rank) + " entries");
    for (size_t c = 0; c < rank; ++c) {
      const auto& cell = j[r][c];
      if (!cell.is_string())
        schema_fail(pointer + "/" + std::to_string(r) + "/" + std::to_string(c),
                    "expected a polynomial string");
      try {
        m.at(r, c) = Poly::parse(cell.get<std::string>(), p, vars);
      } catch (const Error& e) {
        schema_fail(pointer + "/" + std::to_string(r) + "/" + std::to_string(c), e.what());
      }
    }
  }
  return m;
}

ordered_json matrix_json(const PolyMat& m) {
  ordered_json rows = ordered_json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Bundle parse_bundle_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_fail("/", "expected an object");

  Bundle b;
  std::string kind = j.value("kind", std::string("tower"));
  if (kind != "tower" && kind != "connection") schema_fail("/kind", "expected tower|connection");
  b.kind = kind == "tower" ? Bundle::Kind::Tower : Bundle::Kind::Connection;

  if (!j.contains("p") || !j["p"].is_number_unsigned()) schema_fail("/p", "expected a prime");
  unsigned p = j["p"].get<unsigned>();
  try {
    Prime::make(p);
  } catch (const Error& e) {
    fail(ErrorKind::Validation, std::string("at /p: ") + e.what());
  }

  if (!j.contains("fiber_vars")) schema_fail("/fiber_vars", "missing");
  auto fiber = string_list(j["fiber_vars"], "/fiber_vars");
  std::vector<std::string> base;
  if (j.contains("base_vars")) base = string_list(j["base_vars"], "/base_vars");

  if (!j.contains("rank") || !j["rank"].is_number_unsigned() || j["rank"].get<size_t>() == 0)
    schema_fail("/rank", "expected a positive integer");
  size_t rank = j["rank"].get<size_t>();

  std::vector<std::string> vars = fiber;
  vars.insert(vars.end(), base.begin(), base.end());

  if (b.kind == Bundle::Kind::Tower) {
    std::string mode = j.value("mode", std::string("absolute"));
    auto m = mode_from_name(mode);
    if (!m) schema_fail("/mode", "expected absolute|relative");
    if (!j.contains("sigmas") || !j["sigmas"].is_array() || j["sigmas"].empty())
      schema_fail("/sigmas", "expected a non-empty array of matrices");
    Tower t;
    t.p = static_cast<uint16_t>(p);
    t.fiber_vars = fiber;
    t.base_vars = base;
    t.mode = *m;
    t.rank = rank;
    for (size_t i = 0; i < j["sigmas"].size(); ++i)
      t.sigmas.push_back(
          parse_matrix(j["sigmas"][i], "/sigmas/" + std::to_string(i), t.p, vars, rank));
    ValidationReport rep = validate(t);
    if (!rep.ok()) fail(ErrorKind::Validation, rep.first_failure());
    b.tower = std::move(t);
  } else {
    if (!j.contains("matrices") || !j["matrices"].is_array() ||
        j["matrices"].size() != fiber.size())
      schema_fail("/matrices", "expected one matrix per fiber variable");
    Connection c;
    c.p = static_cast<uint16_t>(p);
    c.fiber_vars = fiber;
    c.base_vars = base;
    c.rank = rank;
    for (size_t i = 0; i < j["matrices"].size(); ++i)
      c.matrices.push_back(
          parse_matrix(j["matrices"][i], "/matrices/" + std::to_string(i), c.p, vars, rank));
    b.connection = std::move(c);
  }

  if (j.contains("split")) {
    auto split = string_list(j["split"], "/split");
    for (const auto& v : split)
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        schema_fail("/split", "unknown variable '" + v + "'");
    b.split_base = std::move(split);
  }
  return b;
}

Bundle parse_bundle_file(const std::string& path) {
  return parse_bundle_text(read_file(path));
}

std::string serialize_tower(const Tower& t, const std::vector<std::vector<Poly>>* embedding,
                            const std::optional<std::vector<std::string>>& split_base) {
  ordered_json j;
  j["kind"] = "tower";
  j["p"] = t.p;
  j["fiber_vars"] = t.fiber_vars;
  j["base_vars"] = t.base_vars;
  j["mode"] = mode_name(t.mode);
  j["rank"] = t.rank;
  ordered_json sig = ordered_json::array();
  for (const auto& s : t.sigmas) sig.push_back(matrix_json(s));
  j["sigmas"] = std::move(sig);
  if (split_base) j["split"] = *split_base;
  if (embedding) {
    // generator columns; each column lists its ambient components
    ordered_json emb = ordered_json::array();
    for (const auto& g : *embedding) {
      ordered_json col = ordered_json::array();
      for (const auto& e : g) col.push_back(e.str());
      emb.push_back(std::move(col));
    }
    j["embedding"] = std::move(emb);
  }
  return j.dump(2) + "\n";
}

std::string serialize_connection(const Connection& c) {
  ordered_json j;
  j["kind"] = "connection";
  j["p"] = c.p;
  j["fiber_vars"] = c.fiber_vars;
  j["base_vars"] = c.base_vars;
  j["rank"] = c.rank;
  ordered_json mats = ordered_json::array();
  for (const auto& m : c.matrices) mats.push_back(matrix_json(m));
  j["matrices"] = std::move(mats);
  return j.dump(2) + "\n";
}

std::string Report::render_text() const {
  std::ostringstream os;
  os << "command: " << command << "\n";
  if (!input_path.empty())
    os << "input: " << input_path << " (digest " << input_digest << ")\n";
  for (const auto& [k, v] : params) os << "param: " << k << " = " << v << "\n";
  for (const auto& f : findings) os << "finding: " << f << "\n";
  os << "status: " << status << "\n";
  return os.str();
}

std::string Report::render_json() const {
  ordered_json j;
  j["command"] = command;
  if (!input_path.empty()) {
    j["input"] = ordered_json{{"path", input_path}, {"digest", input_digest}};
  }
  ordered_json pj = ordered_json::object();
  for (const auto& [k, v] : params) pj[k] = v;
  j["params"] = std::move(pj);
  j["findings"] = findings;
  j["status"] = status;
  return j.dump(2) + "\n";
}

}  // namespace strat
