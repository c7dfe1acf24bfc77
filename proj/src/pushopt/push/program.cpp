#include "pushopt/push/program.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace pushopt {

InstructionSet InstructionSet::standard() {
  InstructionSet set;
  for (std::size_t i = 0; i < instruction_count(); ++i) {
    set.add(Instruction{static_cast<std::uint16_t>(i)});
  }
  set.float_erc_ = true;
  set.integer_erc_ = true;
  set.boolean_literals_ = true;
  return set;
}

InstructionSet InstructionSet::from_names(std::span<const std::string> names) {
  InstructionSet set;
  for (const auto& name : names) {
    if (name == "float.erc") {
      set.float_erc_ = true;
    } else if (name == "integer.erc") {
      set.integer_erc_ = true;
    } else if (name == "true" || name == "false") {
      set.boolean_literals_ = true;
    } else if (auto instr = find_instruction(name)) {
      if (!set.contains(*instr)) set.add(*instr);
    } else {
      throw std::invalid_argument("unknown instruction: " + name);
    }
  }
  return set;
}

void InstructionSet::add(Instruction instr) {
  if (mask_.size() <= instr.id) mask_.resize(instruction_count(), false);
  mask_[instr.id] = true;
  instructions_.push_back(instr);
}

bool InstructionSet::contains(Instruction instr) const {
  return instr.id < mask_.size() && mask_[instr.id];
}

std::size_t InstructionSet::atom_count() const {
  return instructions_.size() + (float_erc_ ? 1 : 0) + (integer_erc_ ? 1 : 0) +
         (boolean_literals_ ? 2 : 0);
}

std::vector<std::string> InstructionSet::names() const {
  std::vector<std::string> out;
  for (auto instr : instructions_) out.emplace_back(instruction_name(instr));
  if (float_erc_) out.emplace_back("float.erc");
  if (integer_erc_) out.emplace_back("integer.erc");
  if (boolean_literals_) {
    out.emplace_back("true");
    out.emplace_back("false");
  }
  return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool looks_like_integer(std::string_view tok) {
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i == tok.size()) return false;
  for (; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return false;
  }
  return true;
}

Item parse_token(std::string_view tok, const ParseOptions& options) {
  if (tok == "true") return true;
  if (tok == "false") return false;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (*first == '+') ++first;
  if (looks_like_integer(tok)) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ParseError("integer literal out of range: " + std::string(tok));
    return v;
  }
  const char c = *first;
  if ((c >= '0' && c <= '9') || c == '-' || c == '.') {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc{} && ptr == last) {
      if (!std::isfinite(v)) throw ParseError("non-finite float literal: " + std::string(tok));
      return v;
    }
  }
  auto instr = find_instruction(tok);
  if (!instr) throw ParseError("unknown instruction: " + std::string(tok));
  if (options.instruction_set != nullptr && !options.instruction_set->contains(*instr)) {
    throw ParseError("instruction not enabled: " + std::string(tok));
  }
  return *instr;
}

}  // namespace

Program parse_program(std::string_view text, const ParseOptions& options) {
  std::vector<Item> items;
  int depth = 0;
  bool opened = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '(') {
      if (opened && depth == 0) throw ParseError("content after the closing parenthesis");
      opened = true;
      ++depth;
      ++i;
      continue;
    }
    if (c == ')') {
      if (depth == 0) throw ParseError("unbalanced ')'");
      --depth;
      ++i;
      continue;
    }
    if (depth == 0) throw ParseError("program must be a parenthesised list");
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j]) && text[j] != '(' && text[j] != ')') ++j;
    items.push_back(parse_token(text.substr(i, j - i), options));
    if (items.size() > options.size_limit) {
      throw ParseError("program exceeds the size limit of " + std::to_string(options.size_limit));
    }
    i = j;
  }
  if (!opened) throw ParseError("empty input");
  if (depth != 0) throw ParseError("unbalanced '('");
  return Program(std::move(items));
}

std::string format_float(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string print_item(const Item& item) {
  return std::visit(
      [](const auto& x) -> std::string {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Instruction>) {
          return std::string(instruction_name(x));
        } else if constexpr (std::is_same_v<X, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<X, std::int64_t>) {
          return std::to_string(x);
        } else {
          return format_float(x);
        }
      },
      item);
}

std::string print_program(const Program& program) {
  std::string out = "(";
  bool first = true;
  for (const auto& item : program.items()) {
    if (!first) out += ' ';
    out += print_item(item);
    first = false;
  }
  out += ')';
  return out;
}

}  // namespace pushopt
