#include "dqe/derive_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <utility>
#include <vector>

#include "dqe/error.hpp"

namespace dqe {

namespace {

using i128 = __int128;

constexpr std::int64_t kInt64Max = INT64_MAX;
constexpr int kMaxDivisionScale = 12;

bool fits_int64(i128 v) { return v >= -static_cast<i128>(kInt64Max) - 1 && v <= kInt64Max; }

i128 pow10_i128(int n) {
  i128 r = 1;
  while (n-- > 0) r *= 10;
  return r;
}

// Exact wide decimal used only inside expression evaluation; collapses
// back to Decimal (and int64) at the end.
struct WideDec {
  i128 unscaled = 0;
  int scale = 0;

  void normalize() {
    if (unscaled == 0) {
      scale = 0;
      return;
    }
    while (scale > 0 && unscaled % 10 == 0) {
      unscaled /= 10;
      --scale;
    }
  }
};

std::optional<WideDec> wide_add(WideDec a, WideDec b, int sign) {
  int s = std::max(a.scale, b.scale);
  if (s > 40) return std::nullopt;
  i128 ua = a.unscaled * pow10_i128(s - a.scale);
  i128 ub = b.unscaled * pow10_i128(s - b.scale);
  WideDec r{ua + sign * ub, s};
  r.normalize();
  return r;
}

std::optional<WideDec> wide_mul(WideDec a, WideDec b) {
  // Guard the product; |unscaled| stays below 10^30 so i128 cannot wrap.
  auto mag = [](i128 v) { return v < 0 ? -v : v; };
  if (mag(a.unscaled) > pow10_i128(15) || mag(b.unscaled) > pow10_i128(15)) {
    return std::nullopt;
  }
  WideDec r{a.unscaled * b.unscaled, a.scale + b.scale};
  r.normalize();
  return r;
}

std::optional<WideDec> wide_div(WideDec a, WideDec b) {
  if (b.unscaled == 0) return std::nullopt;
  // a/b = (a.unscaled * 10^b.scale) / (b.unscaled * 10^a.scale); find the
  // smallest scale <= 12 where the division comes out exact.
  i128 num = a.unscaled * pow10_i128(b.scale);
  i128 den = b.unscaled * pow10_i128(a.scale);
  for (int scale = 0; scale <= kMaxDivisionScale; ++scale) {
    i128 scaled = num * pow10_i128(scale);
    if (scaled % den == 0) {
      WideDec r{scaled / den, scale};
      r.normalize();
      return r;
    }
  }
  return std::nullopt;
}

enum class TypeCat { Numeric, Text, Timestamp, Flag };

TypeCat type_of_kind(Kind kind) {
  switch (kind) {
    case Kind::Integer:
    case Kind::Decimal: return TypeCat::Numeric;
    case Kind::Text: return TypeCat::Text;
    case Kind::Timestamp: return TypeCat::Timestamp;
    case Kind::Flag: return TypeCat::Flag;
  }
  return TypeCat::Text;
}

const char* type_name(TypeCat t) {
  switch (t) {
    case TypeCat::Numeric: return "numeric";
    case TypeCat::Text: return "text";
    case TypeCat::Timestamp: return "timestamp";
    case TypeCat::Flag: return "flag";
  }
  return "?";
}

enum class OpCode { Column, Number, String, Add, Sub, Mul, Div, Neg, Concat };

struct Token {
  enum Type { Ident, Number, String, Op, End } type;
  std::string text;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\'') {
      std::string lit;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\'') {
          if (i + 1 < text.size() && text[i + 1] == '\'') {
            lit += '\'';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        lit += text[i++];
      }
      if (!closed) throw ParseError("derive expression: unterminated string literal");
      tokens.push_back({Token::String, lit});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      bool point = false;
      while (i < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i])) ||
              (text[i] == '.' && !point))) {
        point = point || text[i] == '.';
        num += text[i++];
      }
      tokens.push_back({Token::Number, num});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ident += text[i++];
      }
      tokens.push_back({Token::Ident, ident});
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '(' || c == ')') {
      tokens.push_back({Token::Op, std::string(1, c)});
      ++i;
      continue;
    }
    throw ParseError(std::string("derive expression: unexpected character '") + c + "'");
  }
  tokens.push_back({Token::End, ""});
  return tokens;
}

}  // namespace

struct DeriveExpr::Node {
  OpCode op = OpCode::Column;
  TypeCat type = TypeCat::Numeric;
  std::size_t column = 0;      // Column
  Decimal number;              // Number
  std::string literal;         // String
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
};

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, const TableSchema& schema,
         const std::string& target_column)
      : tokens_(std::move(tokens)), schema_(schema), target_(target_column) {}

  std::unique_ptr<DeriveExpr::Node> parse() {
    auto node = expr();
    if (peek().type != Token::End) {
      throw ParseError("derive expression: trailing input after '" + peek().text + "'");
    }
    return node;
  }

 private:
  using Node = DeriveExpr::Node;

  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  bool take_op(const char* op) {
    if (peek().type == Token::Op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    while (true) {
      if (take_op("+")) {
        auto rhs = term();
        lhs = combine_add(std::move(lhs), std::move(rhs));
      } else if (take_op("-")) {
        auto rhs = term();
        lhs = combine_numeric(OpCode::Sub, "-", std::move(lhs), std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> term() {
    auto lhs = factor();
    while (true) {
      if (take_op("*")) {
        lhs = combine_numeric(OpCode::Mul, "*", std::move(lhs), factor());
      } else if (take_op("/")) {
        lhs = combine_numeric(OpCode::Div, "/", std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> factor() {
    if (take_op("-")) {
      auto operand = factor();
      if (operand->type != TypeCat::Numeric) {
        throw ParseError("derive expression: unary '-' needs a numeric operand");
      }
      auto node = std::make_unique<Node>();
      node->op = OpCode::Neg;
      node->type = TypeCat::Numeric;
      node->lhs = std::move(operand);
      return node;
    }
    if (take_op("(")) {
      auto inner = expr();
      if (!take_op(")")) throw ParseError("derive expression: missing ')'");
      return inner;
    }
    Token token = take();
    auto node = std::make_unique<Node>();
    switch (token.type) {
      case Token::Number: {
        auto dec = Decimal::parse(token.text);
        if (!dec) throw ParseError("derive expression: bad number '" + token.text + "'");
        node->op = OpCode::Number;
        node->type = TypeCat::Numeric;
        node->number = *dec;
        return node;
      }
      case Token::String:
        node->op = OpCode::String;
        node->type = TypeCat::Text;
        node->literal = token.text;
        return node;
      case Token::Ident: {
        if (token.text == target_) {
          throw ParseError("derive expression: references the target column '" +
                           target_ + "'");
        }
        auto idx = schema_.column_index(token.text);
        if (!idx) {
          throw ParseError("derive expression: unknown column '" + token.text + "'");
        }
        node->op = OpCode::Column;
        node->type = type_of_kind(schema_.columns[*idx].kind);
        node->column = *idx;
        return node;
      }
      default:
        throw ParseError("derive expression: unexpected end of input");
    }
  }

  std::unique_ptr<Node> combine_add(std::unique_ptr<Node> lhs, std::unique_ptr<Node> rhs) {
    if (lhs->type == TypeCat::Text && rhs->type == TypeCat::Text) {
      auto node = std::make_unique<Node>();
      node->op = OpCode::Concat;
      node->type = TypeCat::Text;
      node->lhs = std::move(lhs);
      node->rhs = std::move(rhs);
      return node;
    }
    return combine_numeric(OpCode::Add, "+", std::move(lhs), std::move(rhs));
  }

  std::unique_ptr<Node> combine_numeric(OpCode op, const char* symbol,
                                        std::unique_ptr<Node> lhs,
                                        std::unique_ptr<Node> rhs) {
    if (lhs->type != TypeCat::Numeric || rhs->type != TypeCat::Numeric) {
      throw ParseError(std::string("derive expression: '") + symbol + "' cannot mix " +
                       type_name(lhs->type) + " and " + type_name(rhs->type));
    }
    auto node = std::make_unique<Node>();
    node->op = op;
    node->type = TypeCat::Numeric;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const TableSchema& schema_;
  std::string target_;
};

// Evaluation value: text or wide decimal, or a verbatim cell for
// timestamp/flag column copies.
struct EvalValue {
  TypeCat type;
  WideDec number;
  std::string text;
  Cell raw;
};

std::optional<EvalValue> eval_node(const DeriveExpr::Node& node, const Row& row) {
  switch (node.op) {
    case OpCode::Column: {
      const Cell& cell = row[node.column];
      if (cell.is_null()) return std::nullopt;  // NULL operand: uncorrectable
      EvalValue v;
      v.type = node.type;
      v.raw = cell;
      if (node.type == TypeCat::Numeric) {
        if (*cell.kind() == Kind::Integer) {
          v.number = WideDec{cell.as_integer(), 0};
        } else {
          v.number = WideDec{cell.as_decimal().unscaled, cell.as_decimal().scale};
        }
      } else if (node.type == TypeCat::Text) {
        v.text = cell.as_text();
      }
      return v;
    }
    case OpCode::Number: {
      EvalValue v;
      v.type = TypeCat::Numeric;
      v.number = WideDec{node.number.unscaled, node.number.scale};
      return v;
    }
    case OpCode::String: {
      EvalValue v;
      v.type = TypeCat::Text;
      v.text = node.literal;
      return v;
    }
    case OpCode::Concat: {
      auto lhs = eval_node(*node.lhs, row);
      auto rhs = eval_node(*node.rhs, row);
      if (!lhs || !rhs) return std::nullopt;
      EvalValue v;
      v.type = TypeCat::Text;
      v.text = lhs->text + rhs->text;
      return v;
    }
    case OpCode::Neg: {
      auto operand = eval_node(*node.lhs, row);
      if (!operand) return std::nullopt;
      operand->number.unscaled = -operand->number.unscaled;
      return operand;
    }
    default: {
      auto lhs = eval_node(*node.lhs, row);
      auto rhs = eval_node(*node.rhs, row);
      if (!lhs || !rhs) return std::nullopt;
      std::optional<WideDec> result;
      switch (node.op) {
        case OpCode::Add: result = wide_add(lhs->number, rhs->number, 1); break;
        case OpCode::Sub: result = wide_add(lhs->number, rhs->number, -1); break;
        case OpCode::Mul: result = wide_mul(lhs->number, rhs->number); break;
        case OpCode::Div: result = wide_div(lhs->number, rhs->number); break;
        default: break;
      }
      if (!result) return std::nullopt;
      EvalValue v;
      v.type = TypeCat::Numeric;
      v.number = *result;
      return v;
    }
  }
}

}  // namespace

DeriveExpr::DeriveExpr() = default;
DeriveExpr::DeriveExpr(DeriveExpr&&) noexcept = default;
DeriveExpr& DeriveExpr::operator=(DeriveExpr&&) noexcept = default;
DeriveExpr::~DeriveExpr() = default;

DeriveExpr DeriveExpr::parse(const std::string& text, const TableSchema& schema,
                             const std::string& target_column) {
  const ColumnSpec* target = schema.column(target_column);
  if (!target) {
    throw ParseError("derive expression: no column '" + target_column + "' in table '" +
                     schema.name + "'");
  }
  DeriveExpr expr;
  expr.text_ = text;
  expr.target_kind_ = target->kind;
  expr.root_ = Parser(tokenize(text), schema, target_column).parse();

  TypeCat result = expr.root_->type;
  TypeCat wanted = type_of_kind(target->kind);
  if (result != wanted) {
    throw ParseError("derive expression: produces " + std::string(type_name(result)) +
                     ", column '" + target_column + "' holds " + type_name(wanted));
  }
  return expr;
}

std::optional<Cell> DeriveExpr::evaluate(const Row& row) const {
  auto value = eval_node(*root_, row);
  if (!value) return std::nullopt;
  switch (target_kind_) {
    case Kind::Text:
      return Cell{value->text};
    case Kind::Integer: {
      WideDec n = value->number;
      n.normalize();
      if (n.scale != 0 || !fits_int64(n.unscaled)) return std::nullopt;
      return Cell{static_cast<std::int64_t>(n.unscaled)};
    }
    case Kind::Decimal: {
      WideDec n = value->number;
      n.normalize();
      if (!fits_int64(n.unscaled) || n.scale > INT32_MAX) return std::nullopt;
      Decimal d{static_cast<std::int64_t>(n.unscaled), static_cast<std::int32_t>(n.scale)};
      return Cell{d.normalize()};
    }
    case Kind::Timestamp:
    case Kind::Flag:
      // Only a bare column reference type-checks for these kinds.
      return value->raw;
  }
  return std::nullopt;
}

}  // namespace dqe
