#include "permmoments/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace pm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delimiter, start);
    fields.push_back(trim(line.substr(start, pos == std::string::npos ? pos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool all_digits(const std::string& s, std::size_t from = 0) {
  if (from >= s.size()) return false;
  for (std::size_t i = from; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

std::size_t resolve_column(const std::string& selector, const std::vector<std::string>& names,
                           std::size_t width, std::size_t fallback) {
  if (selector.empty()) {
    if (fallback >= width)
      throw CsvError("input has " + std::to_string(width) + " column(s); need at least 2", 0);
    return fallback;
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == selector) return i;
  if (all_digits(selector)) {
    const std::size_t idx = std::stoul(selector);
    if (idx < width) return idx;
  }
  throw CsvError("column selector '" + selector + "' does not match any column", 0);
}

struct RawColumns {
  std::vector<std::string> x, y;
  std::vector<std::size_t> lines;
  std::string x_name, y_name;
};

RawColumns read_raw(std::istream& in, const CsvOptions& opts) {
  std::vector<std::string> names;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::string line;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, opts.delimiter);
    if (width == 0) {
      width = fields.size();
      if (opts.header) {
        names = std::move(fields);
        continue;
      }
    } else if (fields.size() != width) {
      throw CsvError("expected " + std::to_string(width) + " fields, found " +
                         std::to_string(fields.size()),
                     line_no);
    }
    rows.emplace_back(line_no, std::move(fields));
  }
  if (width == 0) throw CsvError("input is empty", 0);

  const std::size_t xi = resolve_column(opts.x_col, names, width, 0);
  const std::size_t yi = resolve_column(opts.y_col, names, width, 1);
  if (xi == yi) throw CsvError("x and y selectors resolve to the same column", 0);

  RawColumns raw;
  raw.x_name = names.empty() ? std::to_string(xi) : names[xi];
  raw.y_name = names.empty() ? std::to_string(yi) : names[yi];
  for (auto& [no, fields] : rows) {
    raw.x.push_back(std::move(fields[xi]));
    raw.y.push_back(std::move(fields[yi]));
    raw.lines.push_back(no);
  }
  return raw;
}

template <typename Scalar>
Scalar parse_scalar(const std::string& text) {
  if constexpr (is_floating_v<Scalar>)
    return parse_double(text);
  else
    return parse_rational(text);
}

}  // namespace

double parse_double(const std::string& text) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + text + "'");
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value: '" + text + "'");
  return v;
}

Rational parse_rational(const std::string& text) {
  const auto bad = [&] { return std::invalid_argument("not an exact number: '" + text + "'"); };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    const std::size_t sign = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? 1 : 0;
    if (!all_digits(num, sign) || !all_digits(den)) throw bad();
    if (num[0] == '+') num.erase(0, 1);
    Rational d(den);
    if (d == 0) throw bad();
    return Rational(num) / d;
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  std::string digits;
  long long exponent = 0;
  bool seen_digit = false;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, seen_digit = true)
    digits += text[i];
  if (i < text.size() && text[i] == '.') {
    for (++i; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, seen_digit = true) {
      digits += text[i];
      --exponent;
    }
  }
  if (!seen_digit) throw bad();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    const std::string tail = text.substr(i + 1);
    const std::size_t sign = (!tail.empty() && (tail[0] == '-' || tail[0] == '+')) ? 1 : 0;
    if (!all_digits(tail, sign) || tail.size() > 8) throw bad();
    exponent += std::stoll(tail);
    i = text.size();
  }
  if (i != text.size()) throw bad();
  Rational value(digits);
  Rational scale = ipow(Rational(10), int(std::llabs(exponent)));
  value = exponent >= 0 ? value * scale : value / scale;
  return negative ? Rational(-value) : value;
}

template <typename Scalar>
Dataset<Scalar> read_csv(std::istream& in, const CsvOptions& opts) {
  const RawColumns raw = read_raw(in, opts);
  if (raw.x.size() < 2)
    throw CsvError("dataset needs at least 2 rows, got " + std::to_string(raw.x.size()), 0);
  Vector<Scalar> xs(Eigen::Index(raw.x.size())), ys(Eigen::Index(raw.y.size()));
  for (std::size_t i = 0; i < raw.x.size(); ++i) {
    try {
      xs(Eigen::Index(i)) = parse_scalar<Scalar>(raw.x[i]);
    } catch (const std::invalid_argument& e) {
      throw CsvError(e.what(), raw.lines[i], raw.x_name);
    }
    try {
      ys(Eigen::Index(i)) = parse_scalar<Scalar>(raw.y[i]);
    } catch (const std::invalid_argument& e) {
      throw CsvError(e.what(), raw.lines[i], raw.y_name);
    }
  }
  return Dataset<Scalar>(std::move(xs), std::move(ys));
}

template <typename Scalar>
Dataset<Scalar> read_csv_file(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'", 0);
  return read_csv<Scalar>(in, opts);
}

template <typename Scalar>
void write_csv(std::ostream& out, const Dataset<Scalar>& d, char delimiter) {
  auto format = [](const Scalar& v) -> std::string {
    if constexpr (is_floating_v<Scalar>) {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      return std::string(buf, res.ptr);
    } else {
      return v.str();
    }
  };
  out << 'x' << delimiter << "y\n";
  for (Eigen::Index i = 0; i < d.size(); ++i)
    out << format(d.xs()(i)) << delimiter << format(d.ys()(i)) << '\n';
}

template Dataset<double> read_csv<double>(std::istream&, const CsvOptions&);
template Dataset<Rational> read_csv<Rational>(std::istream&, const CsvOptions&);
template Dataset<double> read_csv_file<double>(const std::string&, const CsvOptions&);
template Dataset<Rational> read_csv_file<Rational>(const std::string&, const CsvOptions&);
template void write_csv<double>(std::ostream&, const Dataset<double>&, char);
template void write_csv<Rational>(std::ostream&, const Dataset<Rational>&, char);

}  // namespace pm
