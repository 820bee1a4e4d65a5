#include "strat/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "strat/diffop.hpp"
#include "strat/io.hpp"

namespace strat {

namespace {

namespace fs = std::filesystem;

struct Loaded {
  Bundle bundle;
  std::string path;
  std::string digest;
};

std::string display_name(const std::string& path) {
  return fs::path(path).filename().string();
}

Loaded load(const std::string& path) {
  std::string text = read_file(path);
  Loaded l;
  l.bundle = parse_bundle_text(text);
  l.path = display_name(path);
  l.digest = digest_hex(text);
  return l;
}

Tower require_tower(const Loaded& l) {
  if (l.bundle.kind != Bundle::Kind::Tower)
    fail(ErrorKind::Validation, "command expects a tower bundle");
  return l.bundle.tower;
}

std::optional<uint32_t> env_degree_cap() {
  const char* e = std::getenv("STRAT_MAX_DEGREE");
  if (!e) return std::nullopt;
  char* end = nullptr;
  unsigned long v = std::strtoul(e, &end, 10);
  if (end == e || *end != '\0')
    fail(ErrorKind::Validation, "STRAT_MAX_DEGREE must be a non-negative integer");
  return static_cast<uint32_t>(v);
}

DescentOptions descent_options(std::optional<uint32_t> flag) {
  DescentOptions o;
  o.max_degree = flag ? flag : env_degree_cap();
  return o;
}

MultiIndex parse_index(const std::string& text, size_t arity) {
  std::vector<uint32_t> e;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      e.push_back(static_cast<uint32_t>(std::stoul(piece)));
    } catch (...) {
      fail(ErrorKind::Parse, "bad index component '" + piece + "'");
    }
  }
  if (e.size() != arity)
    fail(ErrorKind::Dimension, "index arity " + std::to_string(e.size()) +
                                   " does not match the " + std::to_string(arity) +
                                   " active variables");
  return MultiIndex(e);
}

std::string vec_str(const std::vector<Poly>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].str();
  }
  return s + ")";
}

std::string row_str(const PolyMat& m, size_t r) {
  std::string s = "[";
  for (size_t c = 0; c < m.cols(); ++c) {
    if (c) s += ", ";
    s += m.at(r, c).str();
  }
  return s + "]";
}

std::string point_str(const std::vector<uint16_t>& pt) {
  std::string s;
  for (size_t i = 0; i < pt.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(pt[i]);
  }
  return s;
}

struct Emitter {
  std::ostream& out;
  std::ostream& err;
  std::string format;
  std::string out_path;

  // Payload to stdout (or -o file, in which case the report takes stdout).
  int emit(const Report& rep, const std::string& payload, int code) const {
    std::string rendered = format == "json" ? rep.render_json() : rep.render_text();
    if (!payload.empty() && !out_path.empty()) {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) fail(ErrorKind::Validation, "cannot write '" + out_path + "'");
      f << payload;
      out << rendered;
    } else if (!payload.empty()) {
      out << payload;
    } else {
      out << rendered;
    }
    err << rendered;
    return code;
  }
};

int run_selftest(const std::string& dir, const std::string& filter, const Emitter& em);

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact computations with stratified bundles on affine space"};
  app.require_subcommand(1);
  std::string format = "text";
  std::string out_path;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("-o,--output", out_path, "write the result bundle to a file");

  std::string file_a, file_b, index_text, vector_text, filter, golden_dir = "goldens";
  size_t levels = 1, level = 1;
  uint32_t degree = 0;
  std::optional<uint32_t> max_degree;
  uint16_t at_point = 0;

  auto* c_validate = app.add_subcommand("validate", "check a bundle file");
  c_validate->add_option("file", file_a)->required();

  auto* c_action = app.add_subcommand("action", "matrix of a divided-power operator");
  c_action->add_option("file", file_a)->required();
  c_action->add_option("--index", index_text, "operator index, e.g. 2,0")->required();
  auto* vec_opt = c_action->add_option("--vector", vector_text, "semicolon-separated section");

  auto* c_pcurv = app.add_subcommand("pcurvature", "p-curvature of the level-one connection");
  c_pcurv->add_option("file", file_a)->required();

  auto* c_descend = app.add_subcommand("descend", "build a tower from a connection");
  c_descend->add_option("file", file_a)->required();
  c_descend->add_option("--levels", levels, "tower length")->required();
  c_descend->add_option("--max-degree", max_degree, "descent degree cap");

  auto* c_h0 = app.add_subcommand("h0", "truncated horizontal sections");
  c_h0->add_option("file", file_a)->required();
  c_h0->add_option("--level", level)->required();
  c_h0->add_option("--degree", degree)->required();

  auto* c_gm = app.add_subcommand("gm", "0-th pushforward to the base");
  c_gm->add_option("file", file_a)->required();
  c_gm->add_option("--level", level)->required();
  c_gm->add_option("--degree", degree)->required();
  c_gm->add_option("--max-degree", max_degree, "descent degree cap");

  auto* c_fiber = app.add_subcommand("fiber", "restrict to a rational fiber");
  c_fiber->add_option("file", file_a)->required();
  c_fiber->add_option("--at", at_point)->required();

  auto* c_scan = app.add_subcommand("scan", "fiberwise h0 dimensions");
  c_scan->add_option("file", file_a)->required();
  c_scan->add_option("--level", level)->required();
  c_scan->add_option("--degree", degree)->required();

  auto* c_bc = app.add_subcommand("basechange", "compare pushforward fibers with fiber h0");
  c_bc->add_option("file", file_a)->required();
  c_bc->add_option("--level", level)->required();
  c_bc->add_option("--degree", degree)->required();
  c_bc->add_option("--max-degree", max_degree, "descent degree cap");

  auto* c_tensor = app.add_subcommand("tensor", "tensor product of two towers");
  c_tensor->add_option("file_a", file_a)->required();
  c_tensor->add_option("file_b", file_b)->required();

  auto* c_dual = app.add_subcommand("dual", "dual tower");
  c_dual->add_option("file", file_a)->required();

  auto* c_ext = app.add_subcommand("external", "external product on disjoint variables");
  c_ext->add_option("file_a", file_a)->required();
  c_ext->add_option("file_b", file_b)->required();

  auto* c_maxsub = app.add_subcommand("maxsub", "maximal subbundle pulled back from the base");
  c_maxsub->add_option("file", file_a)->required();
  c_maxsub->add_option("--level", level)->required();
  c_maxsub->add_option("--degree", degree)->required();
  c_maxsub->add_option("--max-degree", max_degree, "descent degree cap");

  auto* c_self = app.add_subcommand("selftest", "run the bundled golden suite");
  c_self->add_option("--dir", golden_dir, "golden directory");
  c_self->add_option("--filter", filter, "substring filter on case names");

  std::vector<std::string> argv_r(args.rbegin(), args.rend());
  try {
    app.parse(argv_r);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    int rc = app.exit(e, msg, msg);
    err << msg.str();
    return rc == 0 ? 0 : 1;
  }

  Emitter em{out, err, format, out_path};
  Report rep;

  try {
    if (c_validate->parsed()) {
      rep.command = "validate";
      std::string text = read_file(file_a);
      rep.input_path = display_name(file_a);
      rep.input_digest = digest_hex(text);
      Bundle b = parse_bundle_text(text);  // throws with the offending pointer
      if (b.kind == Bundle::Kind::Tower) {
        ValidationReport v = validate(b.tower);
        for (const auto& c : v.checks)
          rep.findings.push_back(c.name + ": " + (c.ok ? "ok" : "FAIL") +
                                 (c.detail.empty() ? "" : " (" + c.detail + ")"));
      } else {
        rep.findings.push_back("connection bundle: shapes ok");
        rep.findings.push_back(std::string("integrable: ") +
                               (is_flat(b.connection) ? "yes" : "no"));
      }
      return em.emit(rep, "", 0);
    }

    if (c_action->parsed()) {
      rep.command = "action";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Tower t = require_tower(l);
      MultiIndex n = parse_index(index_text, t.active_vars().size());
      rep.params.emplace_back("index", n.str());
      DiffOp op = DiffOp::basis(t.p, t.vars(), t.active_vars(), n);
      rep.findings.push_back("operator = " + op.str());
      if (vec_opt->count()) {
        std::vector<Poly> v;
        std::stringstream ss(vector_text);
        std::string piece;
        while (std::getline(ss, piece, ';')) v.push_back(Poly::parse(piece, t.p, t.vars()));
        if (v.size() != t.rank) fail(ErrorKind::Dimension, "section arity mismatch");
        rep.findings.push_back("action = " + vec_str(stratified_action(t, n, v)));
      } else {
        PolyMat m = action_matrix(t, n);
        for (size_t r = 0; r < m.rows(); ++r)
          rep.findings.push_back("row[" + std::to_string(r) + "] = " + row_str(m, r));
      }
      return em.emit(rep, "", 0);
    }

    if (c_pcurv->parsed()) {
      rep.command = "pcurvature";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Connection c = l.bundle.kind == Bundle::Kind::Tower ? level1_connection(l.bundle.tower)
                                                          : l.bundle.connection;
      auto psis = p_curvature(c);
      bool all_zero = true;
      for (size_t i = 0; i < psis.size(); ++i) {
        for (size_t r = 0; r < psis[i].rows(); ++r)
          rep.findings.push_back("psi[" + c.fiber_vars[i] + "] row[" + std::to_string(r) +
                                 "] = " + row_str(psis[i], r));
        all_zero = all_zero && psis[i].is_zero();
      }
      rep.findings.push_back(std::string("zero: ") + (all_zero ? "yes" : "no"));
      return em.emit(rep, "", 0);
    }

    if (c_descend->parsed()) {
      rep.command = "descend";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Connection c = l.bundle.kind == Bundle::Kind::Tower ? level1_connection(l.bundle.tower)
                                                          : l.bundle.connection;
      DescentOptions opts = descent_options(max_degree);
      rep.params.emplace_back("levels", std::to_string(levels));
      rep.params.emplace_back(
          "max_degree", std::to_string(opts.max_degree.value_or(default_descent_cap(c))));
      Tower t = descend_tower(c, levels, opts);
      rep.findings.push_back("tower length = " + std::to_string(t.length()));
      return em.emit(rep, serialize_tower(t), 0);
    }

    if (c_h0->parsed()) {
      rep.command = "h0";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Tower t = require_tower(l);
      rep.params.emplace_back("level", std::to_string(level));
      rep.params.emplace_back("degree", std::to_string(degree));
      TruncatedH0 h0 = truncated_h0(t, level, degree);
      rep.findings.push_back("dimension = " + std::to_string(h0.dimension()));
      for (size_t i = 0; i < h0.basis.size(); ++i)
        rep.findings.push_back("basis[" + std::to_string(i) + "] = " + vec_str(h0.basis[i]));
      return em.emit(rep, "", 0);
    }

    if (c_gm->parsed() || c_maxsub->parsed()) {
      bool is_max = c_maxsub->parsed();
      rep.command = is_max ? "maxsub" : "gm";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Tower t = require_tower(l);
      RelativeSplit split = l.bundle.split();
      DescentOptions opts = descent_options(max_degree);
      rep.params.emplace_back("level", std::to_string(level));
      rep.params.emplace_back("degree", std::to_string(degree));
      if (opts.max_degree)
        rep.params.emplace_back("max_degree", std::to_string(*opts.max_degree));

      GmResult gm;
      std::vector<MaxSubPoint> points;
      bool all_equal = true;
      if (is_max) {
        MaxSubResult ms = maximal_pullback_sub(t, split, level, degree, opts);
        gm = std::move(ms.gm);
        points = std::move(ms.points);
        all_equal = ms.all_equal;
      } else {
        gm = gm_pushforward(t, split, level, degree, opts);
      }
      for (size_t i = 0; i < gm.ranks.size(); ++i)
        rep.findings.push_back("relative rank at level " + std::to_string(i + 1) + " = " +
                               std::to_string(gm.ranks[i]));
      rep.findings.push_back(std::string("stabilized: ") + (gm.stabilized ? "yes" : "no") +
                             (gm.stabilized
                                  ? " (at level " + std::to_string(gm.stabilized_at) + ")"
                                  : ""));
      rep.findings.push_back("pushforward rank = " + std::to_string(gm.gm.rank));
      for (const auto& q : points)
        rep.findings.push_back("point " + std::to_string(q.point) + ": subbundle rank " +
                               std::to_string(q.sub_rank) + ", fiber h0 " +
                               std::to_string(q.fiber_dim) + ", " +
                               (q.equal ? "equal" : "UNEQUAL"));
      int code = 0;
      if (!gm.stabilized || (is_max && !all_equal)) {
        rep.status = "inconclusive";
        code = 2;
      }
      return em.emit(rep, serialize_tower(gm.gm, &gm.embedding), code);
    }

    if (c_fiber->parsed()) {
      rep.command = "fiber";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Tower t = require_tower(l);
      RelativeSplit split = l.bundle.split();
      rep.params.emplace_back("at", std::to_string(at_point));
      std::vector<uint16_t> pt(split.base_vars.size(), at_point);
      Tower f = fiber_restrict(t, split, pt);
      rep.findings.push_back("fiber tower rank = " + std::to_string(f.rank));
      return em.emit(rep, serialize_tower(f), 0);
    }

    if (c_scan->parsed()) {
      rep.command = "scan";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Tower t = require_tower(l);
      RelativeSplit split = l.bundle.split();
      rep.params.emplace_back("level", std::to_string(level));
      rep.params.emplace_back("degree", std::to_string(degree));
      auto rows = h0_fiber_scan(t, split, level, degree);
      std::ostringstream tsv;
      tsv << "point\tdimension\n";
      for (const auto& r : rows) {
        tsv << point_str(r.point) << "\t" << r.dimension << "\n";
        rep.findings.push_back("point " + point_str(r.point) + ": dimension " +
                               std::to_string(r.dimension));
      }
      return em.emit(rep, tsv.str(), 0);
    }

    if (c_bc->parsed()) {
      rep.command = "basechange";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Tower t = require_tower(l);
      RelativeSplit split = l.bundle.split();
      DescentOptions opts = descent_options(max_degree);
      rep.params.emplace_back("level", std::to_string(level));
      rep.params.emplace_back("degree", std::to_string(degree));
      BaseChangeReport bc = base_change_check(t, split, level, degree, opts);
      rep.findings.push_back(std::string("stabilized: ") + (bc.stabilized ? "yes" : "no"));
      rep.findings.push_back("pushforward rank = " + std::to_string(bc.gm_rank));
      for (const auto& q : bc.points)
        rep.findings.push_back("point " + std::to_string(q.point) + ": pushforward fiber " +
                               std::to_string(q.gm_dim) + ", fiber h0 " +
                               std::to_string(q.fiber_dim) + ", " +
                               (q.equal ? "equal" : "UNEQUAL"));
      if (!bc.note.empty()) rep.findings.push_back("note: " + bc.note);
      int code = 0;
      if (bc.inconclusive) {
        rep.status = "inconclusive";
        code = 2;
      }
      return em.emit(rep, "", code);
    }

    if (c_tensor->parsed() || c_ext->parsed()) {
      bool ext = c_ext->parsed();
      rep.command = ext ? "external" : "tensor";
      Loaded la = load(file_a), lb = load(file_b);
      rep.input_path = la.path + "," + lb.path;
      rep.input_digest = la.digest + "," + lb.digest;
      Tower a = require_tower(la), b = require_tower(lb);
      Tower t = ext ? external_product(a, b) : tensor(a, b);
      rep.findings.push_back("rank = " + std::to_string(t.rank));
      return em.emit(rep, serialize_tower(t), 0);
    }

    if (c_dual->parsed()) {
      rep.command = "dual";
      Loaded l = load(file_a);
      rep.input_path = l.path;
      rep.input_digest = l.digest;
      Tower t = dual(require_tower(l));
      rep.findings.push_back("rank = " + std::to_string(t.rank));
      return em.emit(rep, serialize_tower(t), 0);
    }

    if (c_self->parsed()) {
      return run_selftest(golden_dir, filter, em);
    }
  } catch (const Error& e) {
    rep.status = std::string("error:") + error_kind_name(e.kind());
    if (is_cap_error(e.kind())) rep.status = "inconclusive";
    rep.findings.push_back(e.what());
    std::string rendered = format == "json" ? rep.render_json() : rep.render_text();
    err << rendered;
    return is_cap_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    rep.status = "error:internal";
    rep.findings.push_back(e.what());
    err << (format == "json" ? rep.render_json() : rep.render_text());
    return 1;
  }
  err << "no command\n";
  return 1;
}

namespace {

int run_selftest(const std::string& dir, const std::string& filter, const Emitter& em) {
  Report rep;
  rep.command = "selftest";
  rep.params.emplace_back("dir", dir);
  if (!filter.empty()) rep.params.emplace_back("filter", filter);

  fs::path root(dir);
  std::string manifest_text;
  try {
    manifest_text = read_file((root / "manifest.json").string());
  } catch (const Error&) {
    rep.status = "error:validation";
    rep.findings.push_back("missing manifest at " + (root / "manifest.json").string());
    em.err << (em.format == "json" ? rep.render_json() : rep.render_text());
    return 1;
  }
  nlohmann::ordered_json manifest;
  try {
    manifest = nlohmann::ordered_json::parse(manifest_text);
  } catch (const std::exception& e) {
    rep.status = "error:parse";
    rep.findings.push_back(std::string("manifest: ") + e.what());
    em.err << (em.format == "json" ? rep.render_json() : rep.render_text());
    return 1;
  }

  size_t ran = 0, failed = 0;
  for (const auto& entry : manifest) {
    std::string name = entry.value("name", std::string("unnamed"));
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    ++ran;
    std::vector<std::string> args;
    for (const auto& a : entry["args"]) {
      std::string s = a.get<std::string>();
      if (!s.empty() && s[0] != '-' && fs::exists(root / s)) s = (root / s).string();
      args.push_back(std::move(s));
    }
    int expect_exit = entry.value("expect_exit", 0);
    std::string expect_file = entry.value("expect_stdout", std::string());
    std::ostringstream got_out, got_err;
    int rc = run_command(args, got_out, got_err);
    bool ok = rc == expect_exit;
    std::string detail;
    if (!ok) detail = "exit " + std::to_string(rc) + " != " + std::to_string(expect_exit);
    if (ok && !expect_file.empty()) {
      std::string expected;
      try {
        expected = read_file((root / expect_file).string());
      } catch (const Error&) {
        ok = false;
        detail = "missing expected file " + expect_file;
      }
      if (ok && expected != got_out.str()) {
        ok = false;
        detail = "stdout differs from " + expect_file;
      }
    }
    if (!ok) ++failed;
    rep.findings.push_back("case " + name + ": " + (ok ? "pass" : "FAIL (" + detail + ")"));
  }
  rep.findings.push_back("ran " + std::to_string(ran) + ", failed " + std::to_string(failed));
  if (failed) rep.status = "error:validation";
  return em.emit(rep, "", failed ? 1 : 0);
}

}  // namespace

}  // namespace strat
