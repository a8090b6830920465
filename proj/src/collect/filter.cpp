#include "airan/collect/filter.hpp"

#include <cctype>

namespace airan::collect {

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

FilterPtr FilterExpr::make_and(FilterPtr l, FilterPtr r) {
  auto e = std::make_shared<FilterExpr>();
  e->kind = Kind::And;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

FilterPtr FilterExpr::make_or(FilterPtr l, FilterPtr r) {
  auto e = std::make_shared<FilterExpr>();
  e->kind = Kind::Or;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

FilterPtr FilterExpr::make_not(FilterPtr inner) {
  auto e = std::make_shared<FilterExpr>();
  e->kind = Kind::Not;
  e->lhs = std::move(inner);
  return e;
}

FilterPtr FilterExpr::make_cmp(std::string field, CmpOp op, Value lit) {
  auto e = std::make_shared<FilterExpr>();
  e->kind = Kind::Comparison;
  e->field = std::move(field);
  e->op = op;
  e->literal = std::move(lit);
  return e;
}

FilterPtr FilterExpr::make_in(std::string field, std::vector<Value> members) {
  auto e = std::make_shared<FilterExpr>();
  e->kind = Kind::Membership;
  e->field = std::move(field);
  e->members = std::move(members);
  return e;
}

bool FilterExpr::structurally_equal(const FilterExpr& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::And:
    case Kind::Or:
      return lhs->structurally_equal(*o.lhs) && rhs->structurally_equal(*o.rhs);
    case Kind::Not:
      return lhs->structurally_equal(*o.lhs);
    case Kind::Comparison:
      return field == o.field && op == o.op && literal == o.literal;
    case Kind::Membership:
      return field == o.field && members == o.members;
  }
  return false;
}

namespace {

enum class Tok : std::uint8_t {
  End, LParen, RParen, LBracket, RBracket, Comma,
  And, Or, Not, In, Ident, Number, String, True, False,
  Gt, Ge, Lt, Le, Eq, Ne,
};

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= s_.size()) return t;
    const char c = s_[i_];
    switch (c) {
      case '(': ++i_; t.kind = Tok::LParen; return t;
      case ')': ++i_; t.kind = Tok::RParen; return t;
      case '[': ++i_; t.kind = Tok::LBracket; return t;
      case ']': ++i_; t.kind = Tok::RBracket; return t;
      case ',': ++i_; t.kind = Tok::Comma; return t;
      case '>': ++i_; t.kind = take('=') ? Tok::Ge : Tok::Gt; return t;
      case '<': ++i_; t.kind = take('=') ? Tok::Le : Tok::Lt; return t;
      case '=':
        ++i_;
        if (!take('=')) raise(Errc::SyntaxError, err_at(t.pos, "'=='"));
        t.kind = Tok::Eq;
        return t;
      case '!':
        ++i_;
        if (!take('=')) raise(Errc::SyntaxError, err_at(t.pos, "'!='"));
        t.kind = Tok::Ne;
        return t;
      case '"': return lex_string(t);
      default: break;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word(t);
    raise(Errc::SyntaxError, err_at(t.pos, "a term"));
  }

  static std::string err_at(std::size_t pos, const std::string& expected) {
    return "at position " + std::to_string(pos) + ", expected " + expected;
  }

 private:
  bool take(char c) {
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Token lex_string(Token t) {
    ++i_;  // opening quote
    std::string out;
    while (i_ < s_.size() && s_[i_] != '"') out.push_back(s_[i_++]);
    if (i_ >= s_.size()) raise(Errc::SyntaxError, err_at(t.pos, "closing '\"'"));
    ++i_;
    t.kind = Tok::String;
    t.text = std::move(out);
    return t;
  }

  Token lex_number(Token t) {
    std::size_t start = i_;
    if (s_[i_] == '-') ++i_;
    bool any_digit = false;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      ++i_;
      any_digit = true;
    }
    if (i_ < s_.size() && s_[i_] == '.') {
      ++i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
        any_digit = true;
      }
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      ++i_;
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    if (!any_digit) raise(Errc::SyntaxError, err_at(t.pos, "a number"));
    t.kind = Tok::Number;
    t.text = s_.substr(start, i_ - start);
    t.number = std::stod(t.text);
    return t;
  }

  Token lex_word(Token t) {
    std::size_t start = i_;
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    t.text = s_.substr(start, i_ - start);
    if (t.text == "AND") t.kind = Tok::And;
    else if (t.text == "OR") t.kind = Tok::Or;
    else if (t.text == "NOT") t.kind = Tok::Not;
    else if (t.text == "IN") t.kind = Tok::In;
    else if (t.text == "true") t.kind = Tok::True;
    else if (t.text == "false") t.kind = Tok::False;
    else t.kind = Tok::Ident;
    return t;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(const std::string& text, const AttrSchema& schema)
      : lex_(text), schema_(schema) {
    cur_ = lex_.next();
  }

  FilterPtr parse() {
    if (cur_.kind == Tok::End)
      raise(Errc::SyntaxError, Lexer::err_at(0, "an expression"));
    FilterPtr e = parse_or();
    if (cur_.kind != Tok::End)
      raise(Errc::SyntaxError, Lexer::err_at(cur_.pos, "end of input"));
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind) raise(Errc::SyntaxError, Lexer::err_at(cur_.pos, what));
    advance();
  }

  FilterPtr parse_or() {
    FilterPtr e = parse_and();
    while (cur_.kind == Tok::Or) {
      advance();
      e = FilterExpr::make_or(e, parse_and());
    }
    return e;
  }

  FilterPtr parse_and() {
    FilterPtr e = parse_not();
    while (cur_.kind == Tok::And) {
      advance();
      e = FilterExpr::make_and(e, parse_not());
    }
    return e;
  }

  FilterPtr parse_not() {
    if (cur_.kind == Tok::Not) {
      advance();
      return FilterExpr::make_not(parse_not());
    }
    return parse_prim();
  }

  FilterPtr parse_prim() {
    if (cur_.kind == Tok::LParen) {
      advance();
      FilterPtr e = parse_or();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (cur_.kind != Tok::Ident)
      raise(Errc::SyntaxError, Lexer::err_at(cur_.pos, "'(' , NOT, or a field name"));
    const std::string field = cur_.text;
    const std::size_t field_pos = cur_.pos;
    if (!schema_.has(field)) raise(Errc::UnknownField, field);
    advance();

    if (cur_.kind == Tok::In) {
      advance();
      expect(Tok::LBracket, "'['");
      std::vector<Value> members;
      members.push_back(parse_literal());
      while (cur_.kind == Tok::Comma) {
        advance();
        members.push_back(parse_literal());
      }
      expect(Tok::RBracket, "']'");
      check_in(field, members);
      return FilterExpr::make_in(field, std::move(members));
    }

    CmpOp op;
    switch (cur_.kind) {
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      default:
        raise(Errc::SyntaxError, Lexer::err_at(cur_.pos, "a comparison operator or IN"));
    }
    advance();
    Value lit = parse_literal();
    check_cmp(field, field_pos, op, lit);
    return FilterExpr::make_cmp(field, op, std::move(lit));
  }

  Value parse_literal() {
    switch (cur_.kind) {
      case Tok::Number: {
        Value v = cur_.number;
        advance();
        return v;
      }
      case Tok::String: {
        Value v = cur_.text;
        advance();
        return v;
      }
      case Tok::True: advance(); return Value(true);
      case Tok::False: advance(); return Value(false);
      default:
        raise(Errc::SyntaxError, Lexer::err_at(cur_.pos, "a literal"));
    }
  }

  void check_cmp(const std::string& field, std::size_t pos, CmpOp op, const Value& lit) {
    const AttrType ft = schema_.type(field);
    const AttrType lt = type_of(lit);
    if (ft != lt)
      raise(Errc::TypeError, field + " is " + to_string(ft) + " but literal is " +
                                 to_string(lt) + " (position " + std::to_string(pos) + ")");
    const bool ordering = op == CmpOp::Gt || op == CmpOp::Ge || op == CmpOp::Lt || op == CmpOp::Le;
    if (ordering && ft != AttrType::Number)
      raise(Errc::TypeError, "ordering comparison on non-numeric field " + field);
  }

  void check_in(const std::string& field, const std::vector<Value>& members) {
    const AttrType ft = schema_.type(field);
    if (ft == AttrType::Bool) raise(Errc::TypeError, "IN on boolean field " + field);
    for (const Value& m : members)
      if (type_of(m) != ft)
        raise(Errc::TypeError, field + " is " + to_string(ft) + " but a member is " +
                                   to_string(type_of(m)));
  }

  Lexer lex_;
  const AttrSchema& schema_;
  Token cur_;
};

const Value& attr_or_throw(const DataRecord& r, const std::string& field) {
  const Value* v = r.find(field);
  if (!v) raise(Errc::MissingAttribute, field);
  return *v;
}

bool compare(const Value& lhs, CmpOp op, const Value& rhs) {
  if (type_of(lhs) != type_of(rhs))
    raise(Errc::TypeError, "record value type differs from filter literal");
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    default: break;
  }
  const double a = std::get<double>(lhs);
  const double b = std::get<double>(rhs);
  switch (op) {
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    default: return false;
  }
}

std::string print_literal(const Value& v) {
  if (v.index() == 1) return "\"" + std::get<std::string>(v) + "\"";
  return to_string(v);
}

}  // namespace

FilterPtr parse_filter(const std::string& text, const AttrSchema& schema) {
  return Parser(text, schema).parse();
}

std::string print_filter(const FilterExpr& e) {
  switch (e.kind) {
    case FilterExpr::Kind::And:
      return "(" + print_filter(*e.lhs) + " AND " + print_filter(*e.rhs) + ")";
    case FilterExpr::Kind::Or:
      return "(" + print_filter(*e.lhs) + " OR " + print_filter(*e.rhs) + ")";
    case FilterExpr::Kind::Not:
      return "NOT " + (e.lhs->kind == FilterExpr::Kind::Comparison ||
                               e.lhs->kind == FilterExpr::Kind::Membership
                           ? "(" + print_filter(*e.lhs) + ")"
                           : print_filter(*e.lhs));
    case FilterExpr::Kind::Comparison:
      return e.field + " " + to_string(e.op) + " " + print_literal(e.literal);
    case FilterExpr::Kind::Membership: {
      std::string out = e.field + " IN [";
      for (std::size_t i = 0; i < e.members.size(); ++i) {
        if (i) out += ", ";
        out += print_literal(e.members[i]);
      }
      return out + "]";
    }
  }
  return "";
}

bool eval_filter(const FilterExpr& e, const DataRecord& r) {
  switch (e.kind) {
    case FilterExpr::Kind::And: return eval_filter(*e.lhs, r) && eval_filter(*e.rhs, r);
    case FilterExpr::Kind::Or: return eval_filter(*e.lhs, r) || eval_filter(*e.rhs, r);
    case FilterExpr::Kind::Not: return !eval_filter(*e.lhs, r);
    case FilterExpr::Kind::Comparison: return compare(attr_or_throw(r, e.field), e.op, e.literal);
    case FilterExpr::Kind::Membership: {
      const Value& v = attr_or_throw(r, e.field);
      for (const Value& m : e.members)
        if (v == m) return true;
      return false;
    }
  }
  return false;
}

CompiledFilter compile_filter(const FilterPtr& e) {
  switch (e->kind) {
    case FilterExpr::Kind::And: {
      auto l = compile_filter(e->lhs);
      auto r = compile_filter(e->rhs);
      return [l, r](const DataRecord& rec) { return l(rec) && r(rec); };
    }
    case FilterExpr::Kind::Or: {
      auto l = compile_filter(e->lhs);
      auto r = compile_filter(e->rhs);
      return [l, r](const DataRecord& rec) { return l(rec) || r(rec); };
    }
    case FilterExpr::Kind::Not: {
      auto inner = compile_filter(e->lhs);
      return [inner](const DataRecord& rec) { return !inner(rec); };
    }
    case FilterExpr::Kind::Comparison: {
      const std::string field = e->field;
      const CmpOp op = e->op;
      const Value lit = e->literal;
      return [field, op, lit](const DataRecord& rec) {
        return compare(attr_or_throw(rec, field), op, lit);
      };
    }
    case FilterExpr::Kind::Membership: {
      const std::string field = e->field;
      const std::vector<Value> members = e->members;
      return [field, members](const DataRecord& rec) {
        const Value& v = attr_or_throw(rec, field);
        for (const Value& m : members)
          if (v == m) return true;
        return false;
      };
    }
  }
  raise(Errc::Internal, "unreachable filter kind");
}

}  // namespace airan::collect
