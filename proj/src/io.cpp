#include "netmon/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace netmon {

namespace fs = std::filesystem;

std::string format_real(double x) {
  if (std::isnan(x)) return "NA";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    std::string field(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

double parse_real(const std::string& text, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::parse, where(path, line) + "expected a number, got '" + text + "'");
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& text, const fs::path& path, std::size_t line) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::parse, where(path, line) + "expected an integer, got '" + text + "'");
  }
  return v;
}

bool is_number(const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  return !text.empty() && ec == std::errc() && ptr == text.data() + text.size();
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  return out;
}

fs::path attribute_path(const fs::path& path) {
  return path.parent_path() / (path.stem().string() + ".attributes.csv");
}

}  // namespace

void write_snapshot_file(const fs::path& path, const NetworkStream& stream) {
  if (stream.empty()) fail(ErrorCode::invalid_argument, "cannot write an empty stream");
  const auto& X = stream.front().attributes;
  for (const StreamEntry& e : stream) {
    if (e.attributes != X && (e.attributes->values.rows() != X->values.rows() ||
                                 e.attributes->values.cols() != X->values.cols() || e.attributes->values != X->values)) {
      fail(ErrorCode::invalid_argument, "snapshot files hold one attribute matrix per stream");
    }
  }
  const NetworkSnapshot& first = stream.front().snapshot;
  const fs::path attr_path = attribute_path(path);

  std::ofstream out = open_out(path);
  std::string columns;
  for (std::size_t c = 0; c < X->columns.size(); ++c) columns += (c ? ";" : "") + X->columns[c];
  out << "#netmon n=" << first.n << " directed=" << (first.directed ? 1 : 0) << " family=" << to_string(first.family)
      << " p=" << X->p() << " columns=" << columns << " attributes=" << attr_path.filename().string() << "\n";
  out << "#times ";
  for (std::size_t k = 0; k < stream.size(); ++k) out << (k ? "," : "") << stream[k].snapshot.t;
  out << "\nt,i,j,weight\n";
  for (const StreamEntry& e : stream) {
    const Eigen::VectorXd& w = e.snapshot.weights;
    for (Eigen::Index r = 0; r < w.size(); ++r) {
      if (w[r] == 0.0) continue;
      const auto [i, j] = edge_at(static_cast<std::size_t>(r), first.n, first.directed);
      out << e.snapshot.t << "," << i << "," << j << "," << format_real(w[r]) << "\n";
    }
  }
  if (!out) fail(ErrorCode::io, "write failed for " + path.string());

  std::ofstream attr = open_out(attr_path);
  attr << "i,j";
  for (const auto& c : X->columns) attr << "," << c;
  attr << "\n";
  for (std::size_t r = 0; r < X->rows(); ++r) {
    const auto [i, j] = edge_at(r, first.n, first.directed);
    attr << i << "," << j;
    for (Eigen::Index c = 1; c < X->values.cols(); ++c) attr << "," << format_real(X->values(r, c));
    attr << "\n";
  }
  if (!attr) fail(ErrorCode::io, "write failed for " + attr_path.string());
}

NetworkStream read_snapshot_file(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;

  std::map<std::string, std::string> header;
  if (!std::getline(in, line) || line.rfind("#netmon", 0) != 0) {
    fail(ErrorCode::parse, where(path, 1) + "missing '#netmon' header");
  }
  ++line_no;
  {
    std::istringstream tokens(line.substr(7));
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) fail(ErrorCode::parse, where(path, 1) + "malformed header token '" + tok + "'");
      header[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  for (const char* key : {"n", "directed", "family", "p", "attributes"}) {
    if (!header.count(key)) fail(ErrorCode::parse, where(path, 1) + "header lacks '" + key + "'");
  }
  const auto n = parse_int<std::size_t>(header["n"], path, 1);
  const bool directed = header["directed"] == "1" || header["directed"] == "true";
  const EdgeFamily family = parse_family(header["family"]);
  const auto p = parse_int<std::size_t>(header["p"], path, 1);
  std::vector<std::string> columns;
  if (!header["columns"].empty()) columns = split(header["columns"], ';');
  if (columns.size() != p) fail(ErrorCode::parse, where(path, 1) + "p does not match the column list");
  const std::size_t m = edge_count(n, directed);

  std::vector<TimeIndex> times;
  if (!std::getline(in, line) || line.rfind("#times", 0) != 0) {
    fail(ErrorCode::parse, where(path, 2) + "missing '#times' line");
  }
  ++line_no;
  {
    const std::string list = line.size() > 7 ? line.substr(7) : std::string();
    if (!list.empty()) {
      for (const auto& f : split(list, ',')) times.push_back(parse_int<TimeIndex>(f, path, line_no));
    }
  }
  std::map<TimeIndex, Eigen::VectorXd> weights;
  for (const TimeIndex t : times) {
    if (!weights.emplace(t, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m))).second) {
      fail(ErrorCode::parse, where(path, line_no) + "duplicate time " + std::to_string(t));
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "t,i,j,weight") continue;
    const auto f = split(line, ',');
    if (f.size() != 4) fail(ErrorCode::parse, where(path, line_no) + "expected t,i,j,weight");
    const auto t = parse_int<TimeIndex>(f[0], path, line_no);
    const auto i = parse_int<NodeId>(f[1], path, line_no);
    const auto j = parse_int<NodeId>(f[2], path, line_no);
    const double w = parse_real(f[3], path, line_no);
    auto it = weights.find(t);
    if (it == weights.end()) fail(ErrorCode::parse, where(path, line_no) + "time " + f[0] + " not in '#times'");
    const std::size_t row = edge_index(i, j, n, directed);
    if (it->second[static_cast<Eigen::Index>(row)] != 0.0) {
      fail(ErrorCode::parse, where(path, line_no) + "edge listed twice");
    }
    it->second[static_cast<Eigen::Index>(row)] = w;
  }

  const fs::path attr_path = path.parent_path() / header["attributes"];
  std::ifstream attr = open_in(attr_path);
  EdgeAttributes attrs;
  std::size_t attr_line = 0;
  while (std::getline(attr, line)) {
    ++attr_line;
    if (line.empty() || attr_line == 1) continue;
    const auto f = split(line, ',');
    if (f.size() != p + 2) fail(ErrorCode::parse, where(attr_path, attr_line) + "expected i,j and " + std::to_string(p) + " values");
    std::vector<double> v(p);
    for (std::size_t c = 0; c < p; ++c) v[c] = parse_real(f[c + 2], attr_path, attr_line);
    attrs[{parse_int<NodeId>(f[0], attr_path, attr_line), parse_int<NodeId>(f[1], attr_path, attr_line)}] = std::move(v);
  }
  auto X = std::make_shared<const AttributeMatrix>(build_attribute_matrix(attrs, n, directed, columns));

  NetworkStream stream;
  for (const TimeIndex t : times) stream.push_back(make_snapshot(t, n, directed, family, std::move(weights[t])), X);
  return stream;
}

void write_beta_file(const fs::path& path, const NetworkStream& stream, const std::vector<Eigen::VectorXd>& beta) {
  if (beta.size() != stream.size()) fail(ErrorCode::dimension_mismatch, "one beta per snapshot expected");
  std::ofstream out = open_out(path);
  out << "t";
  for (Eigen::Index c = 0; c < (beta.empty() ? 0 : beta.front().size()); ++c) out << ",beta" << c;
  out << "\n";
  for (std::size_t k = 0; k < beta.size(); ++k) {
    out << stream[k].snapshot.t;
    for (const double b : beta[k]) out << "," << format_real(b);
    out << "\n";
  }
  if (!out) fail(ErrorCode::io, "write failed for " + path.string());
}

std::vector<EdgeEvent> read_events(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<EdgeEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (events.empty() && !f.empty() && !is_number(f[0])) continue;  // header
    if (f.size() != 3 && f.size() != 4) {
      fail(ErrorCode::parse, where(path, line_no) + "expected timestamp,src,dst[,weight]");
    }
    EdgeEvent e{parse_real(f[0], path, line_no), f[1], f[2], 1.0};
    if (f.size() == 4) e.weight = parse_real(f[3], path, line_no);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<std::pair<std::string, std::string>> read_roles(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != 2) fail(ErrorCode::parse, where(path, line_no) + "expected node_id,role");
    if (line_no == 1 && f[0] == "node_id") continue;
    if (!seen.insert(f[0]).second) fail(ErrorCode::parse, where(path, line_no) + "node '" + f[0] + "' listed twice");
    out.emplace_back(f[0], f[1]);
  }
  return out;
}

IngestResult ingest_events(std::vector<EdgeEvent> events,
                           const std::vector<std::pair<std::string, std::string>>& node_roles,
                           const IngestOptions& options) {
  if (!(options.period > 0.0)) fail(ErrorCode::invalid_argument, "period length must be positive");
  IngestResult out;

  const std::set<std::string> keep(options.keep_roles.begin(), options.keep_roles.end());
  std::unordered_map<std::string, std::string> role_of;
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::string> node_role;
  for (const auto& [node, role] : node_roles) {
    role_of[node] = role;
    if (!keep.empty() && !keep.count(role)) continue;
    index_of[node] = out.nodes.size();
    out.nodes.push_back(node);
    node_role.push_back(role);
  }
  if (out.nodes.size() < 2) fail(ErrorCode::invalid_argument, "fewer than two nodes after role filtering");

  std::vector<std::string> roles = options.roles;
  if (roles.empty()) {
    for (const auto& r : node_role) {
      if (std::find(roles.begin(), roles.end(), r) == roles.end()) roles.push_back(r);
    }
  }
  const RolePairEncoder encoder(roles, options.directed);
  for (const auto& r : node_role) encoder.role_index(r);  // unknown roles fail here

  if (!std::is_sorted(events.begin(), events.end(),
                      [](const EdgeEvent& a, const EdgeEvent& b) { return a.timestamp < b.timestamp; })) {
    out.warnings.push_back("events were not in timestamp order; sorted");
    std::stable_sort(events.begin(), events.end(),
                     [](const EdgeEvent& a, const EdgeEvent& b) { return a.timestamp < b.timestamp; });
  }
  if (events.empty()) fail(ErrorCode::invalid_argument, "no events to ingest");
  const double origin = options.origin.value_or(events.front().timestamp);

  const std::size_t n = out.nodes.size();
  const std::size_t m = edge_count(n, options.directed);
  std::vector<Eigen::VectorXd> periods;
  std::size_t dropped = 0;
  std::size_t loops = 0;
  std::size_t early = 0;
  for (const EdgeEvent& e : events) {
    for (const std::string* id : {&e.src, &e.dst}) {
      if (!role_of.count(*id)) fail(ErrorCode::unknown_category, "node '" + *id + "' has no role in the node file");
    }
    const auto si = index_of.find(e.src);
    const auto di = index_of.find(e.dst);
    if (si == index_of.end() || di == index_of.end()) {
      ++dropped;
      continue;
    }
    if (si->second == di->second) {
      ++loops;
      continue;
    }
    if (e.timestamp < origin) {
      ++early;
      continue;
    }
    if (options.family == EdgeFamily::poisson && (e.weight < 0.0 || e.weight != std::floor(e.weight))) {
      fail(ErrorCode::parse, "count weights must be non-negative integers");
    }
    const auto k = static_cast<std::size_t>(std::floor((e.timestamp - origin) / options.period));
    while (periods.size() <= k) periods.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)));
    double& w = periods[k][static_cast<Eigen::Index>(edge_index(si->second, di->second, n, options.directed))];
    w = options.family == EdgeFamily::bernoulli ? 1.0 : w + e.weight;
  }
  if (dropped) out.warnings.push_back(std::to_string(dropped) + " events outside the kept roles skipped");
  if (loops) out.warnings.push_back(std::to_string(loops) + " self-addressed events skipped");
  if (early) out.warnings.push_back(std::to_string(early) + " events before the origin skipped");
  if (periods.empty()) fail(ErrorCode::invalid_argument, "no events fall in any period");

  auto X = std::make_shared<const AttributeMatrix>(build_attribute_matrix(
      [&](NodeId i, NodeId j) { return encoder.encode(node_role[i], node_role[j]); }, encoder.width(), n,
      options.directed, encoder.column_names()));

  std::vector<NetworkSnapshot> snaps;
  for (std::size_t k = 0; k < periods.size(); ++k) {
    snaps.push_back(make_snapshot(static_cast<TimeIndex>(k + 1), n, options.directed, options.family,
                                  std::move(periods[k])));
  }
  std::size_t first = 0;
  if (options.initial_window > 0) {
    if (options.initial_window >= snaps.size()) {
      fail(ErrorCode::invalid_argument, "initial window covers every period");
    }
    out.stream.push_back(accumulate_initial_window(std::span(snaps).first(options.initial_window), 0), X);
    first = options.initial_window;
  }
  for (std::size_t k = first; k < snaps.size(); ++k) out.stream.push_back(std::move(snaps[k]), X);
  return out;
}

void write_arl_table(std::ostream& out, const std::vector<ArlRow>& rows) {
  out << "method,scenario,delta,arl,serl,reps,censored_count\n";
  for (const ArlRow& r : rows) {
    out << r.method << "," << r.scenario << "," << format_real(r.delta) << "," << format_real(r.estimate.arl) << ","
        << format_real(r.estimate.serl) << "," << r.estimate.reps << "," << r.estimate.censored << "\n";
  }
}

void write_calibration_table(std::ostream& out, const std::string& method, const std::vector<CalibrationRow>& rows) {
  out << "method,lambda,l,s,arl0,serl,reps,censored_count,within_tolerance\n";
  for (const CalibrationRow& r : rows) {
    out << method << "," << format_real(r.lambda) << "," << format_real(r.l) << "," << format_real(r.s) << ","
        << format_real(r.arl0.arl) << "," << format_real(r.arl0.serl) << "," << r.arl0.reps << ","
        << r.arl0.censored << "," << (r.within_tolerance ? 1 : 0) << "\n";
  }
}

void write_chart_csv(std::ostream& out, const std::vector<ChartPoint>& points) {
  out << "t,r_bar,z,ucl,lcl,signal\n";
  for (const ChartPoint& p : points) {
    out << p.t << "," << format_real(p.r_bar) << "," << format_real(p.z) << "," << format_real(p.ucl) << ","
        << format_real(p.lcl) << "," << (p.signal ? 1 : 0) << "\n";
  }
}

namespace {

struct Frame {
  double x0, x1, y0, y1;
  static constexpr double width = 720, height = 360, left = 70, right = 20, top = 40, bottom = 45;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

std::string escape(const std::string& s) {
  std::string o;
  for (const char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

void open_svg(std::ostream& out, const Frame& f, const std::string& title, const std::string& xlabel,
              const std::string& ylabel, const std::string& y0_label, const std::string& y1_label) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::width << "\" height=\"" << Frame::height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << Frame::width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n"
      << "<rect x=\"" << Frame::left << "\" y=\"" << Frame::top << "\" width=\""
      << Frame::width - Frame::left - Frame::right << "\" height=\"" << Frame::height - Frame::top - Frame::bottom
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const double base = Frame::height - Frame::bottom;
  out << "<text x=\"" << Frame::left << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">" << num(f.x0)
      << "</text>\n<text x=\"" << Frame::width - Frame::right << "\" y=\"" << base + 16
      << "\" text-anchor=\"middle\">" << num(f.x1) << "</text>\n<text x=\"" << Frame::width / 2 << "\" y=\""
      << base + 34 << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  out << "<text x=\"" << Frame::left - 6 << "\" y=\"" << base << "\" text-anchor=\"end\">" << y0_label
      << "</text>\n<text x=\"" << Frame::left - 6 << "\" y=\"" << Frame::top + 4 << "\" text-anchor=\"end\">"
      << y1_label << "</text>\n<text x=\"16\" y=\"" << Frame::height / 2 << "\" transform=\"rotate(-90 16 "
      << Frame::height / 2 << ")\" text-anchor=\"middle\">" << escape(ylabel) << "</text>\n";
}

template <class XY>
void polyline(std::ostream& out, std::size_t count, XY xy, const char* colour, const char* dash = nullptr) {
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
  if (dash) out << " stroke-dasharray=\"" << dash << "\"";
  out << " points=\"";
  for (std::size_t k = 0; k < count; ++k) {
    const auto [x, y] = xy(k);
    out << (k ? " " : "") << num(x) << "," << num(y);
  }
  out << "\"/>\n";
}

}  // namespace

void write_chart_svg(std::ostream& out, const std::vector<ChartPoint>& points, const std::string& title) {
  Frame f{0, 1, -1, 1};
  if (!points.empty()) {
    f.x0 = static_cast<double>(points.front().t);
    f.x1 = std::max(f.x0 + 1, static_cast<double>(points.back().t));
    double hi = 0.0;
    for (const ChartPoint& p : points) hi = std::max({hi, std::abs(p.z), p.ucl});
    if (hi > 0.0) f.y0 = -1.1 * hi, f.y1 = 1.1 * hi;
  }
  open_svg(out, f, title, "t", "EWMA z", num(f.y0), num(f.y1));
  const std::size_t k = points.size();
  polyline(out, k, [&](std::size_t i) { return std::pair{f.px(points[i].t), f.py(points[i].ucl)}; }, "#c33", "6,4");
  polyline(out, k, [&](std::size_t i) { return std::pair{f.px(points[i].t), f.py(points[i].lcl)}; }, "#c33", "6,4");
  polyline(out, k, [&](std::size_t i) { return std::pair{f.px(points[i].t), f.py(points[i].z)}; }, "#2456a4");
  for (const ChartPoint& p : points) {
    if (p.signal) {
      out << "<circle cx=\"" << num(f.px(p.t)) << "\" cy=\"" << num(f.py(p.z)) << "\" r=\"3\" fill=\"#c33\"/>\n";
    }
  }
  out << "</svg>\n";
}

void write_arl_svg(std::ostream& out, const std::vector<ArlSeries>& series, const std::string& title) {
  static constexpr const char* colours[] = {"#2456a4", "#c33", "#2a8a3a", "#8a5a2a", "#777"};
  Frame f{0, 1, 0, 1};
  bool any = false;
  for (const ArlSeries& s : series) {
    for (std::size_t k = 0; k < s.delta.size(); ++k) {
      const double ly = std::log10(std::max(s.arl[k], 1.0));
      if (!any) f = {s.delta[k], s.delta[k], ly, ly};
      any = true;
      f.x0 = std::min(f.x0, s.delta[k]);
      f.x1 = std::max(f.x1, s.delta[k]);
      f.y0 = std::min(f.y0, ly);
      f.y1 = std::max(f.y1, ly);
    }
  }
  if (f.x1 <= f.x0) f.x1 = f.x0 + 1;
  f.y0 = std::floor(f.y0);
  f.y1 = std::max(f.y0 + 1, std::ceil(f.y1));
  open_svg(out, f, title, "delta", "ARL (log scale)", num(std::pow(10.0, f.y0)), num(std::pow(10.0, f.y1)));
  for (std::size_t s = 0; s < series.size(); ++s) {
    const ArlSeries& a = series[s];
    const char* colour = colours[s % 5];
    polyline(out, a.delta.size(),
             [&](std::size_t k) { return std::pair{f.px(a.delta[k]), f.py(std::log10(std::max(a.arl[k], 1.0)))}; },
             colour);
    out << "<text x=\"" << Frame::width - Frame::right - 8 << "\" y=\"" << Frame::top + 16 + 16 * s
        << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << escape(a.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace netmon
