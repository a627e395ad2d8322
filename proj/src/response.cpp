#include "uirft/response.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace uirft::resp {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool all_whitespace(std::string_view s) {
  return std::all_of(s.begin(), s.end(), is_space);
}

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  std::size_t pos = text.find(needle);
  while (pos != std::string_view::npos) {
    ++n;
    pos = text.find(needle, pos + needle.size());
  }
  return n;
}

// Cursor-based relaxed parser for the answer payload.
class PayloadParser {
 public:
  explicit PayloadParser(std::string_view text) : text_(text) {}

  // Returns false on any syntax or semantic violation.
  bool parse(std::vector<Action>& out) {
    skip_ws();
    bool bracketed = consume('[');
    skip_ws();
    if (!parse_record(out)) return false;
    skip_ws();
    while (consume(',')) {
      skip_ws();
      if (!parse_record(out)) return false;
      skip_ws();
    }
    if (bracketed && !consume(']')) return false;
    skip_ws();
    return pos_ == text_.size();
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool parse_record(std::vector<Action>& out) {
    if (!consume('{')) return false;
    std::optional<ActionType> kind;
    std::vector<double> coord;
    bool has_coord = false;
    skip_ws();
    if (!consume('}')) {
      while (true) {
        std::string key;
        if (!parse_word_or_quoted(key)) return false;
        skip_ws();
        if (!consume(':')) return false;
        skip_ws();
        std::string lk = to_lower(key);
        if (lk == "action") {
          std::string name;
          if (!parse_word_or_quoted(name)) return false;
          kind = canonical_action_name(name);
          if (!kind) return false;
        } else if (lk == "coordinate") {
          coord.clear();
          if (!parse_number_list(coord)) return false;
          has_coord = true;
        } else {
          if (!skip_value()) return false;
        }
        skip_ws();
        if (consume(',')) {
          skip_ws();
          continue;
        }
        break;
      }
      if (!consume('}')) return false;
    }
    if (!kind) return false;

    Action a;
    a.kind = *kind;
    if (*kind == ActionType::Click) {
      if (!has_coord) return false;
      if (coord.size() == 2) {
        a.coordinate = geom::Point{coord[0], coord[1]};
      } else if (coord.size() == 4) {
        if (!(coord[0] <= coord[2] && coord[1] <= coord[3])) return false;
        a.box = geom::BBox{coord[0], coord[1], coord[2], coord[3]};
      } else {
        return false;
      }
    }
    // Coordinates attached to non-click actions are tolerated and dropped.
    out.push_back(a);
    return true;
  }

  bool parse_word_or_quoted(std::string& out) {
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    if (c == '"' || c == '\'') {
      char quote = c;
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != quote) ++pos_;
      if (pos_ >= text_.size()) return false;
      out.assign(text_.substr(start, pos_ - start));
      ++pos_;
      return true;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) return false;
    out.assign(text_.substr(start, pos_ - start));
    return true;
  }

  bool parse_number(double& out) {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' ||
          c == 'E' || ((c == '-' || c == '+') && pos_ > start &&
                       (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) return false;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, out);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) return false;
    return std::isfinite(out);
  }

  bool parse_number_list(std::vector<double>& out) {
    if (!consume('[')) return false;
    skip_ws();
    double v = 0.0;
    if (!parse_number(v)) return false;
    out.push_back(v);
    skip_ws();
    while (consume(',')) {
      if (!parse_number(v)) return false;
      out.push_back(v);
      skip_ws();
    }
    return consume(']');
  }

  // Unknown keys carry a scalar or a bracketed number list; either is skipped.
  bool skip_value() {
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    if (c == '[') {
      std::vector<double> ignored;
      return parse_number_list(ignored);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        c == '.') {
      double num = 0.0;
      return parse_number(num);
    }
    std::string word;
    return parse_word_or_quoted(word);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

std::string format_number(double v) {
  char buf[64];
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf),
                                   static_cast<long long>(v));
    return std::string(buf, ptr);
  }
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::optional<ActionType> canonical_action_name(std::string_view name) {
  std::string n = to_lower(name);
  if (n == "click") return ActionType::Click;
  if (n == "open_app") return ActionType::OpenApp;
  if (n == "scroll") return ActionType::Scroll;
  if (n == "navigate_back") return ActionType::NavigateBack;
  if (n == "input_text") return ActionType::InputText;
  return std::nullopt;
}

std::string_view action_name(ActionType t) {
  switch (t) {
    case ActionType::Click: return "click";
    case ActionType::OpenApp: return "open_app";
    case ActionType::Scroll: return "scroll";
    case ActionType::NavigateBack: return "navigate_back";
    case ActionType::InputText: return "input_text";
  }
  return "click";
}

int count_tokens(std::string_view text) {
  int n = 0;
  bool in_token = false;
  for (char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++n;
    }
  }
  return n;
}

int ParsedResponse::think_token_count() const {
  return think ? count_tokens(*think) : 0;
}

ParsedResponse parse_response(std::string_view raw, Mode mode) {
  ParsedResponse r;
  r.raw.assign(raw);
  r.mode = mode;
  r.token_length = count_tokens(raw);

  std::size_t n_to = count_occurrences(raw, kThinkOpen);
  std::size_t n_tc = count_occurrences(raw, kThinkClose);
  std::size_t n_ao = count_occurrences(raw, kAnswerOpen);
  std::size_t n_ac = count_occurrences(raw, kAnswerClose);

  if (n_ao != 1 || n_ac != 1) return r;

  std::size_t ao = raw.find(kAnswerOpen);
  std::size_t ac = raw.find(kAnswerClose);
  if (ac < ao) return r;

  std::string_view payload = raw.substr(ao + kAnswerOpen.size(),
                                        ac - ao - kAnswerOpen.size());
  std::optional<std::string> think;

  if (mode == Mode::Think) {
    if (n_to != 1 || n_tc != 1) return r;
    std::size_t to = raw.find(kThinkOpen);
    std::size_t tc = raw.find(kThinkClose);
    if (!(to < tc && tc < ao)) return r;
    if (!all_whitespace(raw.substr(0, to))) return r;
    std::size_t tc_end = tc + kThinkClose.size();
    if (!all_whitespace(raw.substr(tc_end, ao - tc_end))) return r;
    think = std::string(raw.substr(to + kThinkOpen.size(), tc - to - kThinkOpen.size()));
  } else {
    if (n_to != 0 || n_tc != 0) return r;
    if (!all_whitespace(raw.substr(0, ao))) return r;
  }
  if (!all_whitespace(raw.substr(ac + kAnswerClose.size()))) return r;

  std::vector<Action> actions;
  if (!PayloadParser(payload).parse(actions) || actions.empty()) return r;

  r.think = std::move(think);
  r.actions = std::move(actions);
  r.well_formed = true;
  return r;
}

std::string serialize_response(const ParsedResponse& r, Mode mode) {
  if (!r.well_formed) {
    throw std::invalid_argument("serialize_response: response is not well-formed");
  }
  if (r.actions.empty()) {
    throw std::invalid_argument("serialize_response: no actions");
  }
  if (mode == Mode::Think && !r.think) {
    throw std::invalid_argument("serialize_response: think segment required in think mode");
  }
  if (mode == Mode::NoThink && r.think) {
    throw std::invalid_argument("serialize_response: think segment forbidden in nothink mode");
  }

  std::string out;
  if (mode == Mode::Think) {
    out += kThinkOpen;
    out += *r.think;
    out += kThinkClose;
  }
  out += kAnswerOpen;
  out += '[';
  for (std::size_t i = 0; i < r.actions.size(); ++i) {
    const Action& a = r.actions[i];
    bool click = a.kind == ActionType::Click;
    if (click == !(a.coordinate.has_value() || a.box.has_value())) {
      throw std::invalid_argument("serialize_response: click actions carry exactly one coordinate payload");
    }
    if (a.coordinate && a.box) {
      throw std::invalid_argument("serialize_response: point and box are mutually exclusive");
    }
    if (i > 0) out += ", ";
    out += "{action: ";
    out += action_name(a.kind);
    if (a.coordinate) {
      out += ", coordinate: [" + format_number(a.coordinate->x) + ", " +
             format_number(a.coordinate->y) + "]";
    } else if (a.box) {
      out += ", coordinate: [" + format_number(a.box->x1) + ", " +
             format_number(a.box->y1) + ", " + format_number(a.box->x2) + ", " +
             format_number(a.box->y2) + "]";
    }
    out += '}';
  }
  out += ']';
  out += kAnswerClose;
  return out;
}

}  // namespace uirft::resp
