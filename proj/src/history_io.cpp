#include "pcnsm/history_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace pcnsm {

namespace {

constexpr std::string_view kMagic = "pcnsm-history v1";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos)
      break;
    start = tab + 1;
  }
  return fields;
}

template <typename T> T parse_field(std::string_view field, std::size_t line, const char *what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw HistoryFormatError(line, std::string("bad ") + what + " '" + std::string(field) + "'");
  return v;
}

std::size_t header_value(std::string_view header, std::string_view key) {
  const auto pos = header.find(key);
  if (pos == std::string_view::npos)
    throw HistoryFormatError(1, "header lacks " + std::string(key));
  auto rest = header.substr(pos + key.size());
  rest = rest.substr(0, rest.find(' '));
  return parse_field<std::size_t>(rest, 1, key.data());
}

} // namespace

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_history(std::ostream &out, const History &history, std::size_t action_count) {
  out << kMagic << " dim=" << history.dim() << " actions=" << action_count << '\n';
  for (TimeIndex t = 1; t <= history.size(); ++t) {
    const auto a = history.action(t);
    out << t << '\t' << (a ? std::to_string(a->index) : std::string("-1")) << '\t'
        << format_real(history.reward(t)) << '\t' << format_real(history.q(t));
    const auto obs = history.observation(t);
    for (Eigen::Index i = 0; i < obs.size(); ++i)
      out << '\t' << format_real(obs[i]);
    out << '\n';
  }
}

void save_history(const History &history, std::size_t action_count,
                  const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("history: cannot write " + path.string());
  write_history(out, history, action_count);
  if (!out)
    throw std::runtime_error("history: write failed for " + path.string());
}

StoredHistory read_history(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw HistoryFormatError(1, "missing header");
  if (line.rfind(kMagic, 0) != 0)
    throw HistoryFormatError(1, "unsupported header '" + line + "'");
  const std::size_t dim = header_value(line, "dim=");
  const std::size_t actions = header_value(line, "actions=");
  if (dim == 0 || actions == 0)
    throw HistoryFormatError(1, "dim and actions must be positive");

  StoredHistory stored{History(static_cast<Eigen::Index>(dim)), actions};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_tabs(line);
    if (fields.size() != 4 + dim)
      throw HistoryFormatError(line_no, "expected " + std::to_string(4 + dim) +
                                            " fields, found " + std::to_string(fields.size()));
    const auto t = parse_field<std::size_t>(fields[0], line_no, "time index");
    if (t != stored.history.size() + 1)
      throw HistoryFormatError(line_no, "time index " + std::to_string(t) + " out of sequence");
    const auto action = parse_field<long long>(fields[1], line_no, "action");
    Experience exp;
    if (action >= 0) {
      if (static_cast<std::size_t>(action) >= actions)
        throw HistoryFormatError(line_no, "action index outside action set");
      exp.action = ActionId{static_cast<std::size_t>(action)};
    } else if (action != -1) {
      throw HistoryFormatError(line_no, "bad action " + std::to_string(action));
    }
    exp.reward = parse_field<double>(fields[2], line_no, "reward");
    const double q = parse_field<double>(fields[3], line_no, "q-value");
    exp.observation.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      exp.observation[static_cast<Eigen::Index>(i)] =
          parse_field<double>(fields[4 + i], line_no, "observation");
    try {
      stored.history.append(exp, q);
    } catch (const std::invalid_argument &e) {
      throw HistoryFormatError(line_no, e.what());
    }
  }
  return stored;
}

StoredHistory load_history(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("history: cannot open " + path.string());
  return read_history(in);
}

} // namespace pcnsm
