#include "cavlat/cli/grammar.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace cavlat::cli {

namespace {

std::string quoted(std::string_view text) { return "'" + std::string(text) + "'"; }

bool consume_suffix(std::string_view& text, std::string_view suffix) {
  if (text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
    text.remove_suffix(suffix.size());
    return true;
  }
  return false;
}

}  // namespace

double parse_number(std::string_view text, std::string_view field) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw ConfigError(std::string(field), "expected a number, got " + quoted(text));
  }
  if (!std::isfinite(value)) {
    throw ConfigError(std::string(field), "value must be finite, got " + quoted(text));
  }
  return value;
}

int parse_int(std::string_view text, std::string_view field) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(field), "expected an integer, got " + quoted(text));
  }
  return value;
}

double parse_angle(std::string_view text, std::string_view field) {
  std::string_view body = text;
  if (consume_suffix(body, "pi") || consume_suffix(body, "\xCF\x80")) {  // "π"
    double factor = 1.0;
    if (body.empty() || body == "+") {
      factor = 1.0;
    } else if (body == "-") {
      factor = -1.0;
    } else {
      consume_suffix(body, "*");
      factor = parse_number(body, field);
    }
    return factor * kPi;
  }
  return parse_number(text, field);
}

SweepAxis parse_axis(std::string_view text, std::string_view field) {
  std::array<std::string_view, 3> parts;
  std::string_view rest = text;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto colon = rest.find(':');
    if ((colon == std::string_view::npos) != (i == 2)) {
      throw ConfigError(std::string(field),
                        "expected start:stop:samples, got " + quoted(text));
    }
    parts[i] = rest.substr(0, colon);
    rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
  }
  SweepAxis axis{parse_angle(parts[0], field), parse_angle(parts[1], field),
                 parse_int(parts[2], field)};
  if (axis.samples < 2) {
    throw ConfigError(std::string(field), "sample count must be >= 2, got " + quoted(parts[2]));
  }
  return axis;
}

AtomicState parse_state(std::string_view text, int sites, std::string_view field) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError(std::string(field),
                      "expected mi:<n>, sf:<N> or coherent:<n>, got " + quoted(text));
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view value = text.substr(colon + 1);
  AtomicState state;
  if (kind == "mi") {
    state = MottInsulator{parse_int(value, field)};
  } else if (kind == "sf") {
    state = Superfluid{parse_int(value, field), sites};
  } else if (kind == "coherent") {
    state = Coherent{parse_number(value, field)};
  } else {
    throw ConfigError(std::string(field), "unknown state kind " + quoted(kind) +
                                              " (expected mi, sf or coherent)");
  }
  try {
    validate(state);
  } catch (const std::exception& e) {
    throw ConfigError(std::string(field), e.what());
  }
  return state;
}

ModeProfile parse_mode(std::string_view text, std::string_view field) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  ModeProfile mode;
  if (kind == "traveling") {
    mode.kind = ModeKind::Traveling;
  } else if (kind == "standing") {
    mode.kind = ModeKind::Standing;
  } else {
    throw ConfigError(std::string(field), "unknown mode kind " + quoted(kind) +
                                              " (expected traveling or standing)");
  }
  if (colon != std::string_view::npos) {
    mode.theta = parse_angle(text.substr(colon + 1), field);
  }
  return mode;
}

std::string format_mode(const ModeProfile& mode) {
  return std::string(to_string(mode.kind)) + ":" + format_double(mode.theta);
}

std::string format_axis(const SweepAxis& axis) {
  return format_double(axis.start) + ":" + format_double(axis.stop) + ":" +
         std::to_string(axis.samples);
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace cavlat::cli
