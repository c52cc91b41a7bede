#include "expansion_io.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace jtcli {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) throw std::runtime_error("bad number '" + s + "'");
  return value;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buf.data(), ptr);
}

std::vector<Entry> entries_of(const jt_expansion* e) {
  const std::size_t n = jt_expansion_n(e);
  const std::size_t size = jt_expansion_size(e);
  std::vector<Entry> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    out[i].nu.resize(n);
    jt_complex c{};
    if (jt_expansion_entry(e, i, &out[i].l, out[i].nu.data(), &c) != JT_OK)
      throw std::runtime_error(jt_last_error_message());
    out[i].re = c.re;
    out[i].im = c.im;
  }
  return out;
}

void write_expansion(std::ostream& out, const jt_expansion* e, Format format) {
  const std::size_t n = jt_expansion_n(e);
  const auto entries = entries_of(e);
  if (format == Format::kJsonRecords) {
    for (const auto& en : entries) {
      nlohmann::ordered_json rec;
      rec["record"] = "coefficient";
      rec["l"] = en.l;
      rec["nu"] = en.nu;
      rec["re"] = en.re;
      rec["im"] = en.im;
      out << rec.dump() << '\n';
    }
    return;
  }
  out << 'l';
  for (std::size_t j = 1; j <= n; ++j) out << ",nu_" << j;
  out << ",re,im\n";
  for (const auto& en : entries) {
    out << en.l;
    for (auto v : en.nu) out << ',' << v;
    out << ',' << format_double(en.re) << ',' << format_double(en.im) << '\n';
  }
}

ParsedExpansion read_expansion(std::istream& in, Format format) {
  ParsedExpansion parsed;
  std::string line;
  if (format == Format::kJsonRecords) {
    bool have_n = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Entry en;
      try {
        const auto rec = nlohmann::json::parse(line);
        if (rec.value("record", "") != "coefficient") continue;
        en.l = rec.at("l").get<std::int64_t>();
        en.nu = rec.at("nu").get<std::vector<std::int64_t>>();
        en.re = rec.at("re").get<double>();
        en.im = rec.at("im").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("bad coefficient record: ") + e.what());
      }
      if (!have_n) {
        parsed.n = en.nu.size();
        have_n = true;
      } else if (en.nu.size() != parsed.n) {
        throw std::runtime_error("inconsistent nu length");
      }
      parsed.entries.push_back(std::move(en));
    }
    return parsed;
  }
  if (!std::getline(in, line)) throw std::runtime_error("missing csv header");
  const auto header = split(line, ',');
  if (header.size() < 3 || header.front() != "l" || header[header.size() - 2] != "re" ||
      header.back() != "im")
    throw std::runtime_error("bad csv header");
  parsed.n = header.size() - 3;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw std::runtime_error("bad csv row: " + line);
    Entry en;
    en.l = parse_number<std::int64_t>(cells[0]);
    for (std::size_t j = 0; j < parsed.n; ++j)
      en.nu.push_back(parse_number<std::int64_t>(cells[1 + j]));
    en.re = parse_number<double>(cells[parsed.n + 1]);
    en.im = parse_number<double>(cells[parsed.n + 2]);
    parsed.entries.push_back(std::move(en));
  }
  return parsed;
}

}  // namespace jtcli
