#include "kvw/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kvw/error.hpp"

namespace kvw {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::int64_t as_int(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  fail(where + " must be an integer");
}

double as_double(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

cplx as_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(where + " must be [re, im]");
  return {as_double(j[0], where + "[0]"), as_double(j[1], where + "[1]")};
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be a list");
  return j;
}

std::vector<cplx> complex_list(const Json& j, const std::string& where) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i) out.push_back(as_complex(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> real_list(const Json& j, const std::string& where) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i) out.push_back(as_double(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail("unknown field '" + it.key() + "' in " + where);
}

IntMatrix matrix_from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) fail("K is empty");
  for (const auto& r : rows)
    if (r.size() != rows.front().size() || r.empty()) fail("K rows have different lengths");
  return IntMatrix::from_rows(rows);
}

InputDocument parse_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("input must be a JSON object");
  reject_unknown(doc, {"K", "n", "tau", "xi", "c", "config", "theta"}, "input");
  if (!doc.contains("K")) fail("missing field 'K'");

  InputDocument out;
  std::vector<std::vector<std::int64_t>> rows;
  const Json& k = doc["K"];
  if (k.is_number()) {
    rows.push_back({as_int(k, "K")});
  } else {
    for (std::size_t i = 0; i < as_array(k, "K").size(); ++i) {
      std::vector<std::int64_t> row;
      const Json& r = k[i];
      if (r.is_number()) {
        row.push_back(as_int(r, "K"));
      } else {
        for (std::size_t j = 0; j < as_array(r, "K row").size(); ++j) row.push_back(as_int(r[j], "K entry"));
      }
      rows.push_back(std::move(row));
    }
  }
  out.K = matrix_from_rows(rows);

  if (doc.contains("n")) {
    std::vector<std::int64_t> n;
    for (std::size_t i = 0; i < as_array(doc["n"], "n").size(); ++i) n.push_back(as_int(doc["n"][i], "n entry"));
    out.n = n;
  }
  if (doc.contains("tau")) out.tau = as_complex(doc["tau"], "tau");
  if (doc.contains("xi")) out.xi = complex_list(doc["xi"], "xi");
  if (doc.contains("c")) {
    std::vector<Rational> c;
    for (std::size_t i = 0; i < as_array(doc["c"], "c").size(); ++i) {
      const Json& e = doc["c"][i];
      if (e.is_string()) {
        try {
          c.push_back(parse_rational(e.get<std::string>()));
        } catch (const std::exception&) {
          fail("c entry '" + e.get<std::string>() + "' is not a rational");
        }
      } else {
        c.emplace_back(as_int(e, "c entry"));
      }
    }
    out.c = c;
  }
  if (doc.contains("config")) {
    std::vector<std::vector<cplx>> layers;
    for (std::size_t i = 0; i < as_array(doc["config"], "config").size(); ++i)
      layers.push_back(complex_list(doc["config"][i], "config[" + std::to_string(i) + "]"));
    out.config = layers;
  }
  if (doc.contains("theta")) {
    const Json& t = doc["theta"];
    if (!t.is_object()) fail("theta must be an object");
    reject_unknown(t, {"a", "b", "z", "omega"}, "theta");
    ThetaInput th;
    if (t.contains("a")) th.a = real_list(t["a"], "theta.a");
    if (t.contains("b")) th.b = real_list(t["b"], "theta.b");
    if (t.contains("z")) th.z = complex_list(t["z"], "theta.z");
    if (t.contains("omega")) {
      const Json& om = as_array(t["omega"], "theta.omega");
      const auto g = static_cast<Eigen::Index>(om.size());
      CMatrix m(g, g);
      for (Eigen::Index i = 0; i < g; ++i) {
        const auto row = complex_list(om[static_cast<std::size_t>(i)], "theta.omega row");
        if (static_cast<Eigen::Index>(row.size()) != g) fail("theta.omega must be square");
        for (Eigen::Index j = 0; j < g; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
      }
      th.omega = m;
    }
    out.theta = th;
  }
  return out;
}

}  // namespace

IntMatrix parse_matrix_text(const std::string& text) {
  std::vector<std::vector<std::int64_t>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '[' || ch == ']') ch = ' ';
    std::istringstream cells(line);
    std::vector<std::int64_t> row;
    std::string cell;
    while (cells >> cell) {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) fail("matrix entry '" + cell + "' is not an integer");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return matrix_from_rows(rows);
}

InputDocument parse_input(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail("input is empty");
  if (text[first] == '{') return parse_json(text);
  InputDocument out;
  out.K = parse_matrix_text(text);
  return out;
}

InputDocument load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_input(ss.str());
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const RMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const IntMatrix& m) { return Json(m.to_rows()); }

Json to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(x);
}

}  // namespace kvw
