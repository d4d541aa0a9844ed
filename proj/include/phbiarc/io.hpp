#ifndef PHBIARC_IO_HPP
#define PHBIARC_IO_HPP

// Text formats used by the command-line tool: key=value problem files, node
// lists for splines, JSON curve files, CSV tables and SVG porcupine plots.
// Everything here works in double precision.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phbiarc/biarc.hpp"
#include "phbiarc/singleph.hpp"
#include "phbiarc/spline.hpp"

namespace phbiarc::io {

using C = Complex<double>;

/// Malformed input text (as opposed to well-formed but infeasible data).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<double> numbers(const std::string& text, const std::string& what) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    double v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) throw ParseError(what + ": bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline double scalar(const std::string& text, const std::string& key) {
  const auto v = numbers(text, key);
  if (v.size() != 1) throw ParseError(key + ": expected one number");
  return v[0];
}

inline C pair(const std::string& text, const std::string& key) {
  const auto v = numbers(text, key);
  if (v.size() != 2) throw ParseError(key + ": expected two numbers");
  return {v[0], v[1]};
}

inline nlohmann::json point(const C& z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline C point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("curve file: expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

struct Problem {
  HermiteData<double> data;
  double lambda = 1;
  double beta0 = 0;
  double beta1 = 0;
};

/// Parses "key = value" lines; '#' starts a comment. Tangents are given
/// either as angles (theta0, theta1) or as vectors (t0, t1), not both.
inline Problem parse_problem(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    static const char* known[] = {"p0", "p1", "theta0", "theta1", "t0", "t1", "k0",
                                  "k1", "length", "lambda", "beta0", "beta1"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!kv.emplace(key, line.substr(eq + 1)).second) throw ParseError("duplicate key '" + key + "'");
  }
  auto need = [&](const std::string& k) -> const std::string& {
    const auto it = kv.find(k);
    if (it == kv.end()) throw ParseError("missing key '" + k + "'");
    return it->second;
  };
  auto tangent = [&](int i) {
    const std::string th = "theta" + std::to_string(i), t = "t" + std::to_string(i);
    const bool has_th = kv.count(th) > 0, has_t = kv.count(t) > 0;
    if (has_th == has_t) throw ParseError("give exactly one of " + th + " and " + t);
    return has_th ? std::polar(1.0, detail::scalar(kv[th], th)) : detail::pair(kv[t], t);
  };
  auto optional = [&](const std::string& k, double dflt) {
    return kv.count(k) ? detail::scalar(kv[k], k) : dflt;
  };
  const C p0 = detail::pair(need("p0"), "p0");
  const C p1 = detail::pair(need("p1"), "p1");
  const C t0 = tangent(0), t1 = tangent(1);
  const double k0 = detail::scalar(need("k0"), "k0");
  const double k1 = detail::scalar(need("k1"), "k1");
  const double length = detail::scalar(need("length"), "length");
  const double lambda = optional("lambda", 1);
  if (!(lambda > 0)) throw ParseError("lambda must be positive");
  return Problem{HermiteData<double>(p0, p1, t0, t1, k0, k1, length), lambda, optional("beta0", 0),
                 optional("beta1", 0)};
}

struct NodesFile {
  std::vector<SplineNode<double>> nodes;
  std::vector<double> params;  // curve parameter per node, when every node has one
  std::vector<double> lengths;
};

/// Lines "node x y tx ty kappa [s]" in order, and one line "lengths l1 l2 ...".
inline NodesFile parse_nodes(std::istream& in) {
  NodesFile f;
  bool have_lengths = false;
  std::size_t with_param = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto sp = line.find_first_of(" \t");
    const std::string head = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : line.substr(sp);
    const std::string where = "line " + std::to_string(lineno);
    if (head == "node") {
      const auto v = detail::numbers(rest, where);
      if (v.size() != 5 && v.size() != 6) throw ParseError(where + ": node needs x y tx ty kappa [s]");
      const C t{v[2], v[3]};
      if (std::abs(t) == 0) throw ParseError(where + ": zero tangent");
      f.nodes.push_back({{v[0], v[1]}, t / std::abs(t), v[4]});
      if (v.size() == 6) {
        f.params.push_back(v[5]);
        ++with_param;
      }
    } else if (head == "lengths") {
      if (have_lengths) throw ParseError(where + ": duplicate lengths line");
      f.lengths = detail::numbers(rest, where);
      have_lengths = true;
    } else {
      throw ParseError(where + ": unknown record '" + head + "'");
    }
  }
  if (!have_lengths) throw ParseError("missing lengths line");
  if (with_param != 0 && with_param != f.nodes.size()) throw ParseError("node parameters must be given for all nodes or none");
  if (f.nodes.size() < 2) throw ParseError("at least two nodes required");
  if (f.lengths.size() + 1 != f.nodes.size()) throw ParseError("need exactly one length per span");
  return f;
}

struct SegmentRecord {
  std::array<C, 8> control_points{};
  std::array<C, 4> preimage{};
  C start;
  double scale = 1;
  double arc_length = 0;
  double energy = 0;
};

struct CandidateRecord {
  double alpha0 = 0;
  double alpha1 = 0;
  std::string branch;
  double energy = 0;
};

struct CurveFile {
  std::string kind;  // "biarc", "single" or "spline"
  std::vector<SegmentRecord> segments;
  nlohmann::json solver = nlohmann::json::object();
  std::vector<CandidateRecord> candidates;

  std::vector<PHSegment7<double>> rebuild() const {
    std::vector<PHSegment7<double>> out;
    for (const auto& s : segments)
      out.emplace_back(PreimageCubic<double>{s.preimage}, s.start, s.scale);
    return out;
  }
};

inline SegmentRecord record(const PHSegment7<double>& seg) {
  SegmentRecord r;
  const auto cp = seg.control_points();
  std::copy(cp.begin(), cp.end(), r.control_points.begin());
  r.preimage = seg.preimage().w;
  r.start = seg.start();
  r.scale = seg.scale();
  r.arc_length = seg.arc_length();
  try {
    r.energy = seg.bending_energy();
  } catch (const CuspError&) {
    r.energy = std::numeric_limits<double>::infinity();
  }
  return r;
}

inline CandidateRecord candidate(const PHBiarc<double>& b) {
  return {b.alpha0(), b.alpha1(), to_string(b.params().branch), b.energy()};
}

inline CurveFile biarc_file(const PHBiarc<double>& b, const std::vector<PHBiarc<double>>& all = {}) {
  CurveFile f;
  f.kind = "biarc";
  f.segments = {record(b.half_a()), record(b.half_b())};
  f.solver = {{"alpha0", b.alpha0()}, {"alpha1", b.alpha1()},
              {"branch", to_string(b.params().branch)}, {"lambda", b.params().lambda},
              {"beta0", b.params().beta0}, {"beta1", b.params().beta1},
              {"zeta_d", b.params().zeta_d}, {"energy", b.energy()},
              {"arc_length", b.arc_length()}};
  for (const auto& c : all) f.candidates.push_back(candidate(c));
  return f;
}

inline CurveFile single_file(const SinglePHSolution<double>& s) {
  CurveFile f;
  f.kind = "single";
  f.segments = {record(s.segment)};
  f.solver = {{"alpha0", s.alpha0}, {"alpha1", s.alpha1}, {"beta0", s.beta0},
              {"beta1", s.beta1}, {"residual", s.residual}, {"energy", s.energy}};
  return f;
}

inline CurveFile spline_file(const G2Spline<double>& sp) {
  CurveFile f;
  f.kind = "spline";
  for (const auto& b : sp.spans()) {
    f.segments.push_back(record(b.half_a()));
    f.segments.push_back(record(b.half_b()));
    f.candidates.push_back(candidate(b));
  }
  f.solver = {{"spans", sp.size()}, {"energy", sp.energy()}, {"arc_length", sp.arc_length()}};
  return f;
}

// Non-finite energies (cusps) are written as null.
inline nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline double number_or_inf(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline nlohmann::json to_json(const CurveFile& f) {
  nlohmann::json j;
  j["kind"] = f.kind;
  j["segments"] = nlohmann::json::array();
  for (const auto& s : f.segments) {
    nlohmann::json js;
    js["control_points"] = nlohmann::json::array();
    for (const auto& p : s.control_points) js["control_points"].push_back(detail::point(p));
    js["preimage"] = nlohmann::json::array();
    for (const auto& w : s.preimage) js["preimage"].push_back(detail::point(w));
    js["start"] = detail::point(s.start);
    js["scale"] = s.scale;
    js["arc_length"] = s.arc_length;
    js["energy"] = number_or_null(s.energy);
    j["segments"].push_back(js);
  }
  j["solver"] = f.solver;
  if (!f.candidates.empty()) {
    j["candidates"] = nlohmann::json::array();
    for (const auto& c : f.candidates)
      j["candidates"].push_back({{"alpha0", c.alpha0}, {"alpha1", c.alpha1}, {"branch", c.branch},
                                 {"energy", number_or_null(c.energy)}});
  }
  return j;
}

inline CurveFile from_json(const nlohmann::json& j) {
  try {
    CurveFile f;
    f.kind = j.at("kind").get<std::string>();
    for (const auto& js : j.at("segments")) {
      SegmentRecord s;
      const auto& cp = js.at("control_points");
      const auto& pre = js.at("preimage");
      if (cp.size() != 8 || pre.size() != 4) throw ParseError("curve file: segment needs 8 control points and 4 preimage coefficients");
      for (std::size_t i = 0; i < 8; ++i) s.control_points[i] = detail::point(cp[i]);
      for (std::size_t i = 0; i < 4; ++i) s.preimage[i] = detail::point(pre[i]);
      s.start = detail::point(js.at("start"));
      s.scale = js.at("scale").get<double>();
      s.arc_length = js.at("arc_length").get<double>();
      s.energy = number_or_inf(js.at("energy"));
      f.segments.push_back(s);
    }
    if (j.contains("solver")) f.solver = j["solver"];
    if (j.contains("candidates"))
      for (const auto& c : j["candidates"])
        f.candidates.push_back({c.at("alpha0").get<double>(), c.at("alpha1").get<double>(),
                                c.at("branch").get<std::string>(), number_or_inf(c.at("energy"))});
    if (f.segments.empty()) throw ParseError("curve file: no segments");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curve file: ") + e.what());
  }
}

inline std::string emit(const CurveFile& f) { return to_json(f).dump(2) + "\n"; }

inline CurveFile parse_curve(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curve file: ") + e.what());
  }
  return from_json(j);
}

/// Six significant digits, the precision of human-facing tables.
inline std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// RFC-4180 CSV: cells quoted only when they contain a delimiter or quote.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        out_ << c;
      } else {
        out_ << '"';
        for (char ch : c) out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
        out_ << '"';
      }
    }
    out_ << "\r\n";
  }

 private:
  std::ostream& out_;
};

struct RenderOptions {
  double porcupine_scale = 0.03;
  int samples = 200;  // per segment
  bool control_polygon = true;
};

/// SVG 1.1 document with the curve, its control polygons and porcupine quills
/// r + s * kappa * n. Quills are red where kappa > 0, blue where kappa < 0.
inline std::string render_svg(const CurveFile& f, const RenderOptions& opt = {}) {
  if (opt.samples < 2) throw ParseError("render: need at least 2 samples");
  const auto segs = f.rebuild();
  std::vector<std::vector<C>> polylines;
  struct Quill {
    C from, to;
    double kappa;
  };
  std::vector<Quill> quills;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](C z) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  };
  for (std::size_t k = 0; k < segs.size(); ++k) {
    std::vector<C> line;
    for (int i = 0; i <= opt.samples; ++i) {
      const double u = double(i) / opt.samples;
      const auto fr = segs[k].evaluate(u);
      line.push_back(fr.point);
      grow(fr.point);
      const C tip = fr.point + opt.porcupine_scale * fr.curvature * fr.normal;
      quills.push_back({fr.point, tip, fr.curvature});
      grow(tip);
    }
    polylines.push_back(std::move(line));
    if (opt.control_polygon)
      for (const auto& p : f.segments[k].control_points) grow(p);
  }
  const double w = std::max(xmax - xmin, 1e-9), h = std::max(ymax - ymin, 1e-9);
  const double pad = 0.05 * std::max(w, h);
  const double stroke = 0.002 * std::max(w, h);
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v == 0 ? 0.0 : v);
    return std::string(buf);
  };
  auto pts = [&](const auto& zs) {
    std::string s;
    for (const auto& z : zs) s += num(z.real()) + "," + num(z.imag()) + " ";
    if (!s.empty()) s.pop_back();
    return s;
  };
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
      << num(std::round(800 * (h + 2 * pad) / (w + 2 * pad))) << "\" viewBox=\"" << num(xmin - pad)
      << " " << num(-(ymax + pad)) << " " << num(w + 2 * pad) << " " << num(h + 2 * pad) << "\">\n"
      << "<!-- model coordinates; scale(1,-1) flips y so that +y points up on screen -->\n"
      << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << num(stroke) << "\">\n";
  svg << "<g id=\"quills\">\n";
  for (const auto& q : quills) {
    if (q.from == q.to) continue;
    svg << "<line x1=\"" << num(q.from.real()) << "\" y1=\"" << num(q.from.imag()) << "\" x2=\""
        << num(q.to.real()) << "\" y2=\"" << num(q.to.imag()) << "\" stroke=\""
        << (q.kappa > 0 ? "#d62728" : "#1f77b4") << "\"/>\n";
  }
  svg << "</g>\n";
  if (opt.control_polygon) {
    svg << "<g id=\"control-polygons\" stroke=\"#999999\" stroke-dasharray=\"" << num(4 * stroke) << "\">\n";
    for (const auto& s : f.segments)
      svg << "<polyline points=\"" << pts(s.control_points) << "\"/>\n";
    svg << "</g>\n";
  }
  svg << "<g id=\"curve\" stroke=\"#000000\">\n";
  for (const auto& line : polylines) svg << "<polyline points=\"" << pts(line) << "\"/>\n";
  svg << "</g>\n</g>\n</svg>\n";
  return svg.str();
}

}  // namespace phbiarc::io

#endif  // PHBIARC_IO_HPP
