#include <cctype>
#include <set>

#include "pe/surface.hpp"

namespace pe::surface {

SyntaxError::SyntaxError(const std::string& msg, SourceSpan span,
                         std::vector<std::string> expected)
    : std::runtime_error(span.to_string() + ": " + msg),
      span_(std::move(span)),
      expected_(std::move(expected)) {}

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "forall", "exists", "existso", "mu",   "nu",   "muo",  "nuo",   "fun",
      "lfun",   "Fun",    "bang",    "let",  "in",   "type", "def",   "judge",
      "reject", "case",   "ocase",   "of",   "pair", "fst",  "snd",   "inl",
      "inr",    "oinl",   "oinr"};
  return kw;
}

enum class Tok { Id, CVar, Num, Sym, Eof };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  Lexer(const std::string& text, const std::string& file) : src_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourcePos start{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::Eof, "", {file_, start, start}});
        return out;
      }
      char c = src_[pos_];
      Token tok;
      if (ident_start(c)) {
        std::string id = take_ident();
        if (peek(0) == '^' && ident_start(peek(1))) {
          advance(1);
          id += "^" + take_ident();
        }
        tok = {Tok::Id, id, {}};
      } else if (c == '^' && ident_start(peek(1))) {
        advance(1);
        tok = {Tok::CVar, "^" + take_ident(), {}};
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          num += src_[pos_];
          advance(1);
        }
        if (peek(0) == 'o' && !ident_char(peek(1)) && (num == "0" || num == "1")) {
          advance(1);
          tok = {Tok::Sym, num + "o", {}};
        } else {
          tok = {Tok::Num, num, {}};
        }
      } else {
        static const char* syms[] = {"(+)", "|-", "=>", "->", "<=", "(", ")", "[", "]", ",",
                                     ":",   ".",  "+",  "!",  "@",  "|", "="};
        std::string matched;
        if ((c == '-' || c == '*') && peek(1) == 'o' && !ident_char(peek(2))) {
          matched = std::string(1, c) + "o";
        } else if (c == '*') {
          matched = "*";
        } else {
          for (const char* s : syms) {
            std::string sv(s);
            if (src_.compare(pos_, sv.size(), sv) == 0) {
              matched = sv;
              break;
            }
          }
        }
        if (matched.empty()) {
          SourcePos end{line_, col_ + 1};
          throw SyntaxError(std::string("unexpected character '") + c + "'",
                            {file_, start, end}, {});
        }
        advance(matched.size());
        tok = {Tok::Sym, matched, {}};
      }
      tok.span = {file_, start, {line_, col_}};
      out.push_back(std::move(tok));
    }
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string take_ident() {
    std::string s;
    while (pos_ < src_.size() && ident_char(src_[pos_])) {
      s += src_[pos_];
      advance(1);
    }
    return s;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
        advance(1);
      if (peek(0) == '-' && peek(1) == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        continue;
      }
      return;
    }
  }

  const std::string& src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, const std::string& file)
      : toks_(Lexer(text, file).run()), file_(file) {}

  STyPtr type() {
    const Token& t = cur();
    if (t.kind == Tok::Id) {
      static const std::set<std::string> binders = {"forall", "exists", "existso", "mu",
                                                    "nu",     "muo",    "nuo"};
      if (binders.count(t.text)) return quantifier();
    }
    STyPtr lhs = sum_type();
    if (is_sym("->") || is_sym("-o")) {
      bool lol = is_sym("-o");
      ++pos_;
      STyPtr rhs = type();
      return mk_ty(lol ? STyKind::Lolli : STyKind::Arrow, "", {lhs, rhs}, lhs->span.start);
    }
    return lhs;
  }

  STmPtr term() {
    const Token& t = cur();
    SourcePos start = t.span.start;
    if (is_kw("fun") || is_kw("lfun")) {
      bool linear = is_kw("lfun");
      ++pos_;
      std::string x = expect_id();
      expect(":");
      STyPtr ann = type();
      expect("=>");
      STmPtr body = term();
      return mk_tm(linear ? STmKind::LinLam : STmKind::Lam, x, ann, {}, {body}, start);
    }
    if (is_kw("Fun")) {
      ++pos_;
      std::string x = expect_binder();
      expect("=>");
      STmPtr body = term();
      return mk_tm(STmKind::TyLam, x, nullptr, {}, {body}, start);
    }
    if (is_kw("bang")) {
      ++pos_;
      STmPtr body = term();
      return mk_tm(STmKind::Bang, "", nullptr, {}, {body}, start);
    }
    if (is_kw("let")) {
      ++pos_;
      std::string x = expect_id();
      expect("<=");
      STmPtr bound = term();
      expect_kw("in");
      STmPtr body = term();
      return mk_tm(STmKind::Let, x, nullptr, {}, {bound, body}, start);
    }
    if (is_kw("case") || is_kw("ocase")) {
      bool lin = is_kw("ocase");
      ++pos_;
      std::vector<STyPtr> tys = type_args(3);
      STmPtr scrut = term();
      expect_kw("of");
      std::string x = expect_id();
      expect("=>");
      STmPtr left = term();
      expect("|");
      std::string y = expect_id();
      expect("=>");
      STmPtr right = term();
      auto node = std::make_shared<STm>(STm{lin ? STmKind::OCase : STmKind::Case, x, y, nullptr,
                                            tys, {scrut, left, right}, span_from(start)});
      return node;
    }
    return app_term();
  }

  std::vector<Decl> file() {
    std::vector<Decl> out;
    while (cur().kind != Tok::Eof) out.push_back(decl());
    return out;
  }

  void expect_eof() {
    if (cur().kind != Tok::Eof) fail("unexpected trailing input", {"end of input"});
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool is_sym(const char* s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_kw(const char* s) const { return cur().kind == Tok::Id && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) {
    std::string m = msg;
    if (cur().kind != Tok::Eof) m += " near '" + cur().text + "'";
    if (!expected.empty()) {
      m += "; expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) m += (i ? ", " : "") + expected[i];
    }
    throw SyntaxError(m, cur().span, std::move(expected));
  }

  void expect(const char* s) {
    if (!is_sym(s)) fail("syntax error", {std::string("'") + s + "'"});
    ++pos_;
  }

  void expect_kw(const char* s) {
    if (!is_kw(s)) fail("syntax error", {std::string("'") + s + "'"});
    ++pos_;
  }

  std::string expect_id() {
    if (cur().kind != Tok::Id || keywords().count(cur().text)) fail("syntax error", {"identifier"});
    return toks_[pos_++].text;
  }

  std::string expect_binder() {
    if (cur().kind == Tok::CVar) return toks_[pos_++].text;
    if (cur().kind != Tok::Id || keywords().count(cur().text))
      fail("syntax error", {"type variable"});
    return toks_[pos_++].text;
  }

  SourceSpan span_from(SourcePos start) const {
    SourcePos end = pos_ > 0 ? toks_[pos_ - 1].span.end : start;
    return {file_, start, end};
  }

  STyPtr mk_ty(STyKind k, std::string name, std::vector<STyPtr> args, SourcePos start,
               int num = 0) {
    return std::make_shared<STy>(STy{k, std::move(name), std::move(args), num, span_from(start)});
  }

  STmPtr mk_tm(STmKind k, std::string name, STyPtr ty, std::vector<STyPtr> tyargs,
               std::vector<STmPtr> args, SourcePos start) {
    return std::make_shared<STm>(
        STm{k, std::move(name), "", std::move(ty), std::move(tyargs), std::move(args),
            span_from(start)});
  }

  STyPtr quantifier() {
    SourcePos start = cur().span.start;
    std::string q = toks_[pos_++].text;
    std::string binder = expect_binder();
    expect(".");
    STyPtr body = type();
    STyKind k = STyKind::Forall;
    if (q == "exists") k = STyKind::Exists;
    if (q == "existso") k = STyKind::ExistsAlg;
    if (q == "mu") k = STyKind::Mu;
    if (q == "nu") k = STyKind::Nu;
    if (q == "muo") k = STyKind::MuC;
    if (q == "nuo") k = STyKind::NuC;
    return mk_ty(k, binder, {body}, start);
  }

  STyPtr sum_type() {
    STyPtr lhs = prod_type();
    while (is_sym("+") || is_sym("(+)")) {
      STyKind k = is_sym("+") ? STyKind::Sum : STyKind::Oplus;
      ++pos_;
      STyPtr rhs = prod_type();
      lhs = mk_ty(k, "", {lhs, rhs}, lhs->span.start);
    }
    return lhs;
  }

  STyPtr prod_type() {
    STyPtr lhs = prefix_type();
    while (is_sym("*") || is_sym("*o") || is_sym(".")) {
      STyKind k = is_sym("*") ? STyKind::Prod : is_sym("*o") ? STyKind::ProdC : STyKind::Copower;
      ++pos_;
      STyPtr rhs = prefix_type();
      lhs = mk_ty(k, "", {lhs, rhs}, lhs->span.start);
    }
    return lhs;
  }

  STyPtr prefix_type() {
    if (is_sym("!")) {
      SourcePos start = cur().span.start;
      ++pos_;
      STyPtr arg = prefix_type();
      return mk_ty(STyKind::Bang, "", {arg}, start);
    }
    return atom_type();
  }

  STyPtr atom_type() {
    const Token& t = cur();
    SourcePos start = t.span.start;
    if (t.kind == Tok::Id && !keywords().count(t.text)) {
      ++pos_;
      return mk_ty(STyKind::Var, t.text, {}, start);
    }
    if (t.kind == Tok::CVar) {
      ++pos_;
      return mk_ty(STyKind::Var, t.text, {}, start);
    }
    if (t.kind == Tok::Num) {
      int n = std::stoi(t.text);
      ++pos_;
      return mk_ty(STyKind::Num, "", {}, start, n);
    }
    if (is_sym("1o") || is_sym("0o")) {
      bool unit = is_sym("1o");
      ++pos_;
      return mk_ty(unit ? STyKind::UnitC : STyKind::ZeroC, "", {}, start);
    }
    if (is_sym("(")) {
      ++pos_;
      STyPtr inner = type();
      expect(")");
      return inner;
    }
    if (t.kind == Tok::Id && (t.text == "forall" || t.text == "exists")) return quantifier();
    fail("syntax error", {"type"});
  }

  std::vector<STyPtr> type_args(std::size_t n) {
    expect("[");
    std::vector<STyPtr> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) expect(",");
      out.push_back(type());
    }
    expect("]");
    return out;
  }

  bool starts_atom() const {
    const Token& t = cur();
    if (t.kind == Tok::Id) return !keywords().count(t.text);
    return t.kind == Tok::Sym && t.text == "(";
  }

  STmPtr sugar_form() {
    SourcePos start = cur().span.start;
    std::string kw = toks_[pos_++].text;
    STmKind k = STmKind::Pair;
    std::size_t nargs = 1;
    if (kw == "pair") nargs = 2;
    if (kw == "fst") k = STmKind::Fst;
    if (kw == "snd") k = STmKind::Snd;
    if (kw == "inl") k = STmKind::Inl;
    if (kw == "inr") k = STmKind::Inr;
    if (kw == "oinl") k = STmKind::OInl;
    if (kw == "oinr") k = STmKind::OInr;
    std::vector<STyPtr> tys = type_args(2);
    std::vector<STmPtr> args;
    for (std::size_t i = 0; i < nargs; ++i) {
      if (!starts_atom()) fail("syntax error", {"argument"});
      args.push_back(postfix_term());
    }
    return mk_tm(k, "", nullptr, std::move(tys), std::move(args), start);
  }

  STmPtr app_term() {
    static const std::set<std::string> sugar = {"pair", "fst", "snd", "inl",
                                                "inr",  "oinl", "oinr"};
    STmPtr head;
    if (cur().kind == Tok::Id && sugar.count(cur().text)) {
      head = sugar_form();
    } else {
      if (!starts_atom()) fail("syntax error", {"term"});
      head = postfix_term();
    }
    while (starts_atom()) {
      STmPtr arg = postfix_term();
      head = mk_tm(STmKind::App, "", nullptr, {}, {head, arg}, head->span.start);
    }
    return head;
  }

  STmPtr postfix_term() {
    STmPtr t = atom_term();
    while (is_sym("@")) {
      ++pos_;
      expect("[");
      STyPtr ty = type();
      expect("]");
      t = mk_tm(STmKind::TyApp, "", ty, {}, {t}, t->span.start);
    }
    return t;
  }

  STmPtr atom_term() {
    const Token& t = cur();
    SourcePos start = t.span.start;
    if (t.kind == Tok::Id && !keywords().count(t.text)) {
      ++pos_;
      return mk_tm(STmKind::Var, t.text, nullptr, {}, {}, start);
    }
    if (is_sym("(")) {
      ++pos_;
      STmPtr inner = term();
      expect(")");
      return inner;
    }
    fail("syntax error", {"term"});
  }

  SBinding binding() {
    std::string x = expect_id();
    expect(":");
    return {x, type()};
  }

  void context(Decl& d) {
    if (!is_sym("|") && !is_sym("|-")) {
      d.gamma.push_back(binding());
      while (is_sym(",")) {
        ++pos_;
        d.gamma.push_back(binding());
      }
    }
    if (is_sym("|")) {
      ++pos_;
      d.delta = binding();
    }
    expect("|-");
    d.term = term();
    if (is_sym(":")) {
      ++pos_;
      d.type = type();
    }
  }

  Decl decl() {
    Decl d;
    SourcePos start = cur().span.start;
    if (is_kw("type")) {
      ++pos_;
      d.kind = DeclKind::TypeDef;
      d.name = expect_id();
      expect("=");
      d.type = type();
    } else if (is_kw("def")) {
      ++pos_;
      d.kind = DeclKind::Def;
      d.name = expect_id();
      if (is_sym(":")) {
        ++pos_;
        d.type = type();
      }
      expect("=");
      d.term = term();
    } else if (is_kw("judge")) {
      ++pos_;
      d.kind = DeclKind::Judge;
      context(d);
    } else if (is_kw("reject")) {
      ++pos_;
      d.kind = DeclKind::Reject;
      if (cur().kind != Tok::Id) fail("syntax error", {"error code"});
      d.error_code = toks_[pos_++].text;
      context(d);
    } else {
      fail("syntax error", {"'type'", "'def'", "'judge'", "'reject'"});
    }
    d.span = span_from(start);
    return d;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string file_;
};

}  // namespace

bool is_keyword(const std::string& word) { return keywords().count(word) > 0; }

STyPtr parse_type(const std::string& text, const std::string& file) {
  Parser p(text, file);
  STyPtr t = p.type();
  p.expect_eof();
  return t;
}

STmPtr parse_term(const std::string& text, const std::string& file) {
  Parser p(text, file);
  STmPtr t = p.term();
  p.expect_eof();
  return t;
}

std::vector<Decl> parse_file(const std::string& text, const std::string& file) {
  Parser p(text, file);
  return p.file();
}

}  // namespace pe::surface
