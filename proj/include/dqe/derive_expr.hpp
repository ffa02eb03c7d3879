#pragma once

#include <memory>
#include <optional>
#include <string>

#include "dqe/tabular.hpp"
#include "dqe/value.hpp"

namespace dqe {

// Row expression for derive corrections: +, -, *, / over numeric columns
// and literals (exact decimal arithmetic), + as concatenation over text,
// bare column references for any kind. 'single quotes' delimit string
// literals ('' escapes a quote). Parsing type-checks against the schema;
// the target column itself is not referencable.
class DeriveExpr {
 public:
  DeriveExpr(DeriveExpr&&) noexcept;
  DeriveExpr& operator=(DeriveExpr&&) noexcept;
  ~DeriveExpr();

  // Throws ParseError on syntax, unknown column, kind mismatch, or a
  // result kind incompatible with the target column.
  static DeriveExpr parse(const std::string& text, const TableSchema& schema,
                          const std::string& target_column);

  // nullopt marks the row uncorrectable: a NULL operand, division that
  // does not terminate within 12 decimal places, division by zero,
  // overflow, or a fractional result for an integer target.
  std::optional<Cell> evaluate(const Row& row) const;

  const std::string& text() const { return text_; }

  struct Node;  // parse tree, opaque outside the implementation

 private:
  DeriveExpr();

  std::string text_;
  std::unique_ptr<Node> root_;
  Kind target_kind_ = Kind::Text;
};

}  // namespace dqe
