#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "combandit/game.hpp"
#include "combandit/text.hpp"

namespace combandit {

namespace {

constexpr std::string_view kMagic = "# combandit transcript v1";

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ';';
    s += format_double(values[i]);
  }
  return s;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> values;
  for (auto part : split(text, ';')) values.push_back(parse_double(part));
  return values;
}

std::size_t parse_size(std::string_view text) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void write_transcript(std::ostream& os, const Transcript& tr,
                      bool include_hidden) {
  const AdversaryConfig& c = tr.config;
  os << kMagic << '\n';
  os << "# family=" << family_name(c.dims.family) << " d=" << c.dims.d
     << " k=" << c.dims.k << " n=" << c.dims.n << " T=" << c.horizon
     << " sigma=" << format_double(c.sigma)
     << " epsilon=" << format_double(c.epsilon)
     << " noise_mode=" << noise_mode_name(c.noise_mode)
     << " clipped=" << (c.clipped ? 1 : 0)
     << " theorem4=" << (c.theorem4 ? 1 : 0) << " seed=" << c.seed
     << " x_star=" << c.x_star.to_string();
  if (c.masked_coordinate) os << " masked=" << *c.masked_coordinate;
  os << '\n';
  os << "t,action,lambda,z" << (include_hidden ? ",loss" : "") << '\n';
  for (std::size_t t = 0; t < tr.horizon(); ++t) {
    os << (t + 1) << ',' << tr.actions[t].to_string() << ','
       << format_double(tr.observed[t]) << ',' << join(tr.noise[t]);
    if (include_hidden) os << ',' << join(tr.hidden_losses[t].values);
    os << '\n';
  }
}

Transcript read_transcript(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic) {
    throw std::invalid_argument("missing transcript header");
  }
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
    throw std::invalid_argument("missing transcript config line");
  }
  std::map<std::string, std::string, std::less<>> fields;
  for (auto token : split(std::string_view(line).substr(2), ' ')) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) continue;
    fields.emplace(std::string(token.substr(0, eq)),
                   std::string(token.substr(eq + 1)));
  }
  const auto field = [&](const char* key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw std::invalid_argument(std::string("transcript lacks ") + key);
    }
    return it->second;
  };

  Transcript tr;
  AdversaryConfig& c = tr.config;
  c.dims = Dimensions{parse_family(field("family")), parse_size(field("d")),
                      parse_size(field("k")), parse_size(field("n"))};
  c.horizon = parse_size(field("T"));
  c.sigma = parse_double(field("sigma"));
  c.epsilon = parse_double(field("epsilon"));
  c.noise_mode = parse_noise_mode(field("noise_mode"));
  c.clipped = field("clipped") == "1";
  c.theorem4 = field("theorem4") == "1";
  c.seed = std::stoull(field("seed"));
  c.x_star = Action::from_string(field("x_star"));
  if (fields.count("masked")) c.masked_coordinate = parse_size(field("masked"));

  if (!std::getline(is, line) || line.rfind("t,action,lambda,z", 0) != 0) {
    throw std::invalid_argument("missing transcript column header");
  }
  const bool hidden = line.find(",loss") != std::string::npos;
  // Reads exactly T rows, so concatenated transcripts parse one at a time.
  while (tr.actions.size() < c.horizon) {
    if (!std::getline(is, line)) {
      throw std::invalid_argument("transcript ends before round " +
                                  std::to_string(tr.actions.size() + 1));
    }
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != (hidden ? 5u : 4u)) {
      throw std::invalid_argument("bad transcript row: " + line);
    }
    tr.actions.push_back(Action::from_string(cols[1]));
    tr.observed.push_back(parse_double(cols[2]));
    tr.noise.push_back(parse_list(cols[3]));
    if (hidden) tr.hidden_losses.push_back(LossVector{parse_list(cols[4])});
  }
  const auto& planted = c.x_star.support();
  tr.planted_counts.assign(planted.size(), 0);
  for (const Action& x : tr.actions) {
    for (std::size_t j = 0; j < planted.size(); ++j) {
      if (x.test(planted[j])) ++tr.planted_counts[j];
    }
  }
  return tr;
}

}  // namespace combandit
