#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "drrbfpu/pum.hpp"

namespace drrbfpu {

namespace {

constexpr const char* kHeader = "drrbfpu-model v1";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_vector(std::ofstream& out, const char* tag, const Eigen::VectorXd& v) {
  out << tag;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << g17(v(i));
  out << '\n';
}

class Tokenizer {
 public:
  explicit Tokenizer(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw FormatError("cannot open " + path);
  }

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw FormatError(path_ + ": unexpected end of file");
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  // next whitespace-separated token on the current logical line stream
  std::string token() {
    std::string t;
    while (!(current_ >> t)) {
      current_.clear();
      current_.str(line());
    }
    return t;
  }

  void expect(const std::string& want) {
    const std::string got = token();
    if (got != want) throw FormatError(path_ + ": expected '" + want + "', got '" + got + "'");
  }

  double number() {
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw FormatError(path_ + ": bad number '" + t + "'");
    return v;
  }

  long integer() {
    const std::string t = token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) throw FormatError(path_ + ": bad integer '" + t + "'");
    return v;
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::istringstream current_;
};

}  // namespace

void save_model(const std::string& path, const GlobalModel& model) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");

  out << kHeader << '\n';
  out << "config c " << g17(model.config.c.value()) << " mu " << g17(model.config.mu)
      << " overlap " << g17(model.cover.overlap) << " zero_function_threshold "
      << g17(model.config.zero_function_threshold) << " denominator_floor "
      << g17(model.config.denominator_floor) << '\n';

  out << "points " << model.points.size() << '\n';
  for (int i = 0; i < model.points.size(); ++i)
    out << g17(model.points.point(i).x()) << ' ' << g17(model.points.point(i).y()) << '\n';

  out << "cover " << model.cover.count() << '\n';
  for (int l = 0; l < model.cover.count(); ++l)
    out << g17(model.cover.center(l).x()) << ' ' << g17(model.cover.center(l).y()) << ' '
        << g17(model.cover.radius(l)) << '\n';

  for (int l = 0; l < model.cover.count(); ++l) {
    const LocalRationalModel& m = model.locals[std::size_t(l)];
    out << "patch " << l << " nodes " << m.size() << " zero " << (m.zero_model ? 1 : 0)
        << " lambda_min " << g17(m.lambda_min) << " f_norm " << g17(m.f_norm) << " mu_used "
        << g17(m.mu_used) << '\n';
    out << "indices";
    for (int idx : m.node_indices) out << ' ' << idx;
    out << '\n';
    write_vector(out, "q", m.q_values);
    write_vector(out, "alpha", m.alpha);
    write_vector(out, "beta", m.beta);
  }
  out << "end\n";
  if (!out) throw FormatError("write failed: " + path);
}

GlobalModel load_model(const std::string& path) {
  Tokenizer tok(path);
  if (tok.line() != kHeader) throw FormatError(path + ": not a '" + kHeader + "' file");

  GlobalModel model;
  tok.expect("config");
  tok.expect("c");
  const double c = tok.number();
  tok.expect("mu");
  const double mu = tok.number();
  tok.expect("overlap");
  const double overlap = tok.number();
  tok.expect("zero_function_threshold");
  const double zft = tok.number();
  tok.expect("denominator_floor");
  const double floor = tok.number();
  model.config.c = ShapeParameter(c);
  model.config.mu = mu;
  model.config.zero_function_threshold = zft;
  model.config.denominator_floor = floor;

  tok.expect("points");
  const long n_points = tok.integer();
  if (n_points < 1) throw FormatError(path + ": point count must be positive");
  model.points.coords.resize(2, n_points);
  for (long i = 0; i < n_points; ++i) {
    const double x = tok.number(), y = tok.number();
    model.points.coords.col(i) = Point(x, y);
  }

  tok.expect("cover");
  const long nc = tok.integer();
  if (nc < 1) throw FormatError(path + ": patch count must be positive");
  model.cover.centers.resize(2, nc);
  model.cover.radii.resize(nc);
  model.cover.overlap = overlap;
  for (long l = 0; l < nc; ++l) {
    const double x = tok.number(), y = tok.number();
    model.cover.centers.col(l) = Point(x, y);
    model.cover.radii(l) = tok.number();
    if (!(model.cover.radii(l) > 0.0)) throw FormatError(path + ": radius must be positive");
  }

  model.locals.resize(std::size_t(nc));
  for (long l = 0; l < nc; ++l) {
    tok.expect("patch");
    if (tok.integer() != l) throw FormatError(path + ": patch blocks out of order");
    tok.expect("nodes");
    const long n = tok.integer();
    if (n < 1) throw FormatError(path + ": patch node count must be positive");
    tok.expect("zero");
    const long zero = tok.integer();
    LocalRationalModel& m = model.locals[std::size_t(l)];
    tok.expect("lambda_min");
    m.lambda_min = tok.number();
    tok.expect("f_norm");
    m.f_norm = tok.number();
    tok.expect("mu_used");
    m.mu_used = tok.number();
    m.zero_model = zero != 0;
    m.c = model.config.c;
    m.denominator_floor = model.config.denominator_floor;

    tok.expect("indices");
    m.node_indices.resize(std::size_t(n));
    m.nodes.resize(2, n);
    for (long k = 0; k < n; ++k) {
      const long idx = tok.integer();
      if (idx < 0 || idx >= n_points) throw FormatError(path + ": node index out of range");
      m.node_indices[std::size_t(k)] = int(idx);
      m.nodes.col(k) = model.points.point(int(idx));
    }
    auto read_vec = [&](const char* tag, Eigen::VectorXd& v) {
      tok.expect(tag);
      v.resize(n);
      for (long k = 0; k < n; ++k) v(k) = tok.number();
    };
    read_vec("q", m.q_values);
    read_vec("alpha", m.alpha);
    read_vec("beta", m.beta);
  }
  tok.expect("end");

  model.index = PatchIndex(model.cover);
  return model;
}

}  // namespace drrbfpu
