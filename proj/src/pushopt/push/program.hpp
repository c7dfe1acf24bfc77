#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pushopt {

/// Index into the instruction table.
struct Instruction {
  std::uint16_t id = 0;
  friend auto operator<=>(const Instruction&, const Instruction&) = default;
};

/// One genome item: an instruction or a boolean/integer/float literal.
using Item = std::variant<Instruction, bool, std::int64_t, double>;

inline bool is_instruction(const Item& item) { return std::holds_alternative<Instruction>(item); }

/// Number of registered instructions.
std::size_t instruction_count();
std::string_view instruction_name(Instruction instr);
std::optional<Instruction> find_instruction(std::string_view name);

/// The instructions and constant generators available to program generation
/// and accepted by the parser. "float.erc", "integer.erc", "true" and "false"
/// are generator entries rather than executable instructions.
class InstructionSet {
 public:
  InstructionSet() = default;

  /// Every implemented instruction plus float/integer ERCs and boolean literals.
  static InstructionSet standard();
  /// Builds a set from names; throws std::invalid_argument on unknown names.
  static InstructionSet from_names(std::span<const std::string> names);

  bool contains(Instruction instr) const;
  std::span<const Instruction> instructions() const { return instructions_; }
  bool float_erc() const { return float_erc_; }
  bool integer_erc() const { return integer_erc_; }
  bool boolean_literals() const { return boolean_literals_; }

  /// Total number of generator atoms (instructions + enabled constant kinds).
  std::size_t atom_count() const;
  std::vector<std::string> names() const;

 private:
  std::vector<Instruction> instructions_;
  std::vector<bool> mask_;
  bool float_erc_ = false;
  bool integer_erc_ = false;
  bool boolean_literals_ = false;

  void add(Instruction instr);
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultSizeLimit = 100;

/// A flat Push program.
class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Item> items) : items_(std::move(items)) {}

  std::span<const Item> items() const { return items_; }
  std::vector<Item>& mutable_items() { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Item& operator[](std::size_t i) const { return items_[i]; }

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::vector<Item> items_;
};

struct ParseOptions {
  std::size_t size_limit = kDefaultSizeLimit;
  /// When null every registered instruction is accepted.
  const InstructionSet* instruction_set = nullptr;
};

/// Parses a parenthesised Push expression; nested lists are flattened depth first.
Program parse_program(std::string_view text, const ParseOptions& options = {});

/// Single-line canonical form, e.g. "(3 2 integer.+)".
std::string print_program(const Program& program);
std::string print_item(const Item& item);

/// Shortest decimal text that reads back to the same double, always containing
/// a '.' or exponent so it is never mistaken for an integer literal.
std::string format_float(double value);

}  // namespace pushopt
