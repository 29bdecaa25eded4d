#ifndef CLASSDESC_PARSER_HPP
#define CLASSDESC_PARSER_HPP

#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "classdesc/ast.hpp"
#include "classdesc/diagnostics.hpp"
#include "classdesc/lexer.hpp"

namespace classdesc {

struct ParseResult {
  std::vector<RawDecl> decls;
  Diagnostics diagnostics;
};

namespace detail {

// Recursive-descent parser over the token stream. Recognizes class, struct
// and union definitions (template classes and anonymous structs in typedefs
// included), typedefs and the omit / single_obj_ptr pragmas. Anything else
// is skipped: silently at file scope, with a warning inside a class body.
class Parser {
 public:
  Parser(const std::vector<Token>& toks, Diagnostics& diags)
      : toks_(toks), diags_(diags) {}

  std::vector<RawDecl> run() {
    while (!at_end()) {
      const Token& t = cur();
      if (t.is(TokenKind::PragmaDirective)) {
        parse_pragma();
      } else if (t.is_keyword("template")) {
        parse_template();
      } else if (t.is_keyword("class") || t.is_keyword("struct") ||
                 t.is_keyword("union")) {
        parse_class_at_scope({});
      } else if (t.is_keyword("typedef")) {
        parse_typedef();
      } else if (t.is_keyword("namespace")) {
        parse_namespace();
      } else if (t.is_keyword("extern") && next().is_punct("\"C\"") &&
                 next(2).is_punct("{")) {
        advance();
        advance();
        advance();
        scopes_.push_back("");  // extern "C" block: no qualification
      } else if (t.is_punct("}") && !scopes_.empty()) {
        scopes_.pop_back();
        advance();
      } else if (t.is_punct(";") || t.is_punct("}")) {
        advance();
      } else {
        std::size_t before = i_;
        skip_statement();
        // skip_statement stops before unmatched closers; at file scope they
        // are just stray tokens, so drop one and keep going.
        if (i_ == before) advance();
      }
    }
    return std::move(out_);
  }

 private:
  // --- cursor -----------------------------------------------------------

  const Token& cur() const { return toks_[i_]; }
  const Token& next(std::size_t n = 1) const {
    std::size_t j = i_ + n;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  bool at_end() const { return cur().is(TokenKind::EndOfInput); }
  void advance() {
    if (!at_end()) ++i_;
  }
  SourcePos pos_of(const Token& t) const { return SourcePos{t.line, t.column}; }

  void warn(const std::string& msg, const Token& at) {
    diags_.push_back(Diagnostic{Severity::Warning, msg, at.line, at.column, {}});
  }
  void error(const std::string& msg, const Token& at) {
    diags_.push_back(Diagnostic{Severity::Error, msg, at.line, at.column, {}});
  }

  std::string qualify(const std::string& name) const {
    std::string q;
    for (const auto& s : scopes_)
      if (!s.empty()) q += s + "::";
    return q + name;
  }

  // --- generic skipping -------------------------------------------------

  // Skip to the statement end: the next ';' at the current nesting level,
  // or past a balanced '{...}' body (function definitions carry no ';').
  // Stops before an unmatched '}' so class/namespace closers survive.
  void skip_statement() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = cur();
      if (t.is_punct("{") || t.is_punct("(") || t.is_punct("[")) {
        ++depth;
        bool was_brace = t.is_punct("{");
        advance();
        if (was_brace && depth == 1) {
          skip_until_depth_zero(1);
          return;
        }
        continue;
      }
      if (t.is_punct("}") || t.is_punct(")") || t.is_punct("]")) {
        if (depth == 0) return;  // unmatched: enclosing scope's closer
        --depth;
        advance();
        continue;
      }
      if (t.is_punct(";") && depth == 0) {
        advance();
        return;
      }
      advance();
    }
  }

  // Consume tokens until bracket depth returns to zero, then an optional ';'.
  void skip_until_depth_zero(int depth) {
    while (!at_end() && depth > 0) {
      const Token& t = cur();
      if (t.is_punct("{") || t.is_punct("(") || t.is_punct("["))
        ++depth;
      else if (t.is_punct("}") || t.is_punct(")") || t.is_punct("]"))
        --depth;
      advance();
    }
    if (cur().is_punct(";")) advance();
  }

  // Consume a balanced '(...)' group, returning the tokens strictly inside.
  std::vector<Token> consume_paren_group() {
    std::vector<Token> inner;
    int depth = 0;
    while (!at_end()) {
      const Token& t = cur();
      if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) {
        if (depth > 0) inner.push_back(t);
        ++depth;
      } else if (t.is_punct(")") || t.is_punct("]") || t.is_punct("}")) {
        --depth;
        if (depth == 0) {
          advance();
          return inner;
        }
        inner.push_back(t);
      } else {
        if (depth > 0) inner.push_back(t);
      }
      advance();
    }
    return inner;
  }

  static bool word_like(const Token& t) {
    return t.is(TokenKind::Identifier) || t.is(TokenKind::Keyword) ||
           t.is(TokenKind::IntegerLiteral);
  }

  static std::string join_tokens(const std::vector<Token>& ts) {
    std::string out;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (k > 0 && word_like(ts[k]) && word_like(ts[k - 1])) out += ' ';
      out += ts[k].text;
    }
    return out;
  }

  // --- pragmas ----------------------------------------------------------

  void parse_pragma() {
    const Token& t = cur();
    std::vector<std::string> words;
    std::string w;
    for (char c : t.text) {
      if (c == ' ') {
        if (!w.empty()) {
          words.push_back(w);
          w.clear();
        }
      } else {
        w += c;
      }
    }
    if (!w.empty()) words.push_back(w);

    if (words[0] == "omit") {
      if (words.size() == 2) {
        out_.push_back(RawDecl::make_omit(OmitPragma{"ALL", words[1]}, pos_of(t)));
      } else if (words.size() == 3) {
        out_.push_back(
            RawDecl::make_omit(OmitPragma{words[1], words[2]}, pos_of(t)));
      } else {
        warn("malformed omit pragma: expected 'omit [action] typename'", t);
      }
    } else if (words[0] == "single_obj_ptr") {
      if (words.size() == 2) {
        out_.push_back(
            RawDecl::make_single_obj(SingleObjPragma{words[1]}, pos_of(t)));
      } else {
        warn("malformed single_obj_ptr pragma: expected one typename", t);
      }
    }
    advance();
  }

  // --- namespaces -------------------------------------------------------

  void parse_namespace() {
    advance();  // 'namespace'
    std::string name;
    while (cur().is(TokenKind::Identifier)) {
      if (!name.empty()) name += "::";
      name += cur().text;
      advance();
      if (cur().is_punct("::"))
        advance();
      else
        break;
    }
    if (cur().is_punct("{")) {
      advance();
      scopes_.push_back(name);
    } else {
      skip_statement();  // namespace alias or malformed
    }
  }

  // --- templates --------------------------------------------------------

  void parse_template() {
    const Token& start = cur();
    advance();  // 'template'
    if (!cur().is_punct("<")) {
      skip_statement();
      return;
    }
    advance();
    std::vector<TemplateParam> params;
    std::vector<Token> current;
    int depth = 1;
    while (!at_end() && depth > 0) {
      const Token& t = cur();
      if (t.is_punct("<")) ++depth;
      if (t.is_punct(">")) {
        --depth;
        if (depth == 0) {
          advance();
          break;
        }
      }
      if (t.is_punct(",") && depth == 1) {
        params.push_back(make_template_param(current));
        current.clear();
      } else {
        current.push_back(t);
      }
      advance();
    }
    if (!current.empty()) params.push_back(make_template_param(current));

    if (cur().is_keyword("class") || cur().is_keyword("struct") ||
        cur().is_keyword("union")) {
      parse_class_at_scope(params);
    } else {
      // Template function or variable: outside the supported subset.
      skip_statement();
      (void)start;
    }
  }

  static TemplateParam make_template_param(const std::vector<Token>& toks) {
    std::vector<Token> sig = toks;
    // Strip a default argument.
    for (std::size_t k = 0; k < sig.size(); ++k) {
      if (sig[k].is_punct("=")) {
        sig.resize(k);
        break;
      }
    }
    TemplateParam p;
    if (!sig.empty() && sig.back().is(TokenKind::Identifier)) {
      p.name = sig.back().text;
      sig.pop_back();
    }
    p.kind_text = join_tokens(sig);
    if (p.kind_text.empty()) p.kind_text = "class";
    return p;
  }

  // --- class definitions ------------------------------------------------

  void parse_class_at_scope(const std::vector<TemplateParam>& template_params) {
    auto decl = parse_class_head_and_body(template_params);
    if (!decl) return;
    // Trailing declarators after a file-scope definition ('struct S {...} s;')
    // declare variables, not members; drop them.
    while (!at_end() && !cur().is_punct(";")) advance();
    if (cur().is_punct(";")) advance();
    (void)decl;
  }

  // Parses from the class-key keyword. Emits the RawDecl for the class (and
  // any nested classes) itself; returns the declared name, or nullopt when
  // the construct was not a supported definition.
  std::optional<std::string> parse_class_head_and_body(
      const std::vector<TemplateParam>& template_params,
      std::string forced_name = {}) {
    const Token& kw = cur();
    SourcePos begin = pos_of(kw);
    ClassKind kind = kw.is_keyword("class")   ? ClassKind::Class
                     : kw.is_keyword("struct") ? ClassKind::Struct
                                               : ClassKind::Union;
    advance();

    std::string name;
    while (cur().is(TokenKind::Identifier)) {
      if (!name.empty()) name += "::";
      name += cur().text;
      advance();
      if (cur().is_punct("::") && next().is(TokenKind::Identifier))
        advance();
      else
        break;
    }
    if (cur().is_keyword("final")) advance();

    if (cur().is_punct(";")) {  // forward declaration
      advance();
      return std::nullopt;
    }

    ClassDecl decl;
    decl.kind = kind;
    decl.template_params = template_params;
    decl.name = !forced_name.empty() ? forced_name
                : !name.empty()      ? qualify(name)
                                     : std::string{};

    if (cur().is_punct(":")) {
      advance();
      parse_base_list(decl);
    }

    if (!cur().is_punct("{")) {
      // 'class C x;' or other non-definition use.
      skip_statement();
      return std::nullopt;
    }

    if (decl.kind == ClassKind::Union && !decl.bases.empty()) {
      error("union '" + decl.name + "' cannot have base classes", kw);
      decl.bases.clear();
    }

    advance();  // '{'
    if (!parse_class_body(decl, kw)) return std::nullopt;

    if (decl.name.empty()) {
      warn("anonymous " + std::string(class_kind_name(kind)) +
               " outside a typedef; skipped",
           kw);
      return std::nullopt;
    }

    SourcePos end = pos_of(cur());
    out_.push_back(RawDecl::make_class(std::move(decl), begin, end));
    return out_.back().class_decl.name;
  }

  void parse_base_list(ClassDecl& decl) {
    while (!at_end() && !cur().is_punct("{") && !cur().is_punct(";")) {
      Access access = decl.kind == ClassKind::Class ? Access::Private
                                                    : Access::Public;
      bool saw_virtual = false;
      while (cur().is_keyword("virtual") || cur().is_keyword("public") ||
             cur().is_keyword("private") || cur().is_keyword("protected")) {
        if (cur().is_keyword("virtual")) saw_virtual = true;
        if (cur().is_keyword("public")) access = Access::Public;
        if (cur().is_keyword("private")) access = Access::Private;
        if (cur().is_keyword("protected")) access = Access::Protected;
        advance();
      }
      if (saw_virtual)
        error("virtual base classes are not supported", cur());
      std::string base = read_qualified_type_name();
      if (base.empty()) {
        warn("malformed base class list", cur());
        while (!at_end() && !cur().is_punct("{") && !cur().is_punct(";"))
          advance();
        return;
      }
      decl.bases.push_back(BaseSpec{base, access});
      if (cur().is_punct(","))
        advance();
      else
        break;
    }
  }

  // Reads 'A', 'A::B', 'A<T>::B', 'A<x,y>' ... as one spelled name. Stops
  // before a trailing '::*' so member-pointer declarators stay intact.
  std::string read_qualified_type_name() {
    std::vector<Token> parts;
    if (!cur().is(TokenKind::Identifier)) return {};
    while (true) {
      if (!cur().is(TokenKind::Identifier)) break;
      parts.push_back(cur());
      advance();
      if (cur().is_punct("<")) {
        int depth = 0;
        while (!at_end()) {
          const Token& t = cur();
          if (t.is_punct("<")) ++depth;
          if (t.is_punct(">")) --depth;
          if (t.is_punct(";") || t.is_punct("{") || t.is_punct("}")) break;
          parts.push_back(t);
          advance();
          if (depth == 0) break;
        }
      }
      if (cur().is_punct("::") && next().is(TokenKind::Identifier)) {
        parts.push_back(cur());
        advance();
        continue;
      }
      break;
    }
    return join_tokens(parts);
  }

  // Returns false when the body never closed (the declaration is abandoned).
  bool parse_class_body(ClassDecl& decl, const Token& class_token) {
    Access access = decl.default_access();
    bool saw_nonpublic_label = false;

    while (true) {
      if (at_end()) {
        error("unbalanced braces in definition of '" +
                  (decl.name.empty() ? std::string("<anonymous>") : decl.name) +
                  "'",
              class_token);
        return false;
      }
      const Token& t = cur();
      if (t.is_punct("}")) {
        advance();
        break;
      }
      if (t.is_punct(";")) {
        advance();
        continue;
      }
      if ((t.is_keyword("public") || t.is_keyword("private") ||
           t.is_keyword("protected")) &&
          next().is_punct(":")) {
        access = t.is_keyword("public")    ? Access::Public
                 : t.is_keyword("private") ? Access::Private
                                           : Access::Protected;
        if (access != Access::Public) saw_nonpublic_label = true;
        advance();
        advance();
        continue;
      }
      if (t.is_keyword("friend")) {
        skip_statement();
        continue;
      }
      // Access macros inserted by insert-friend are expected noise.
      if (t.is(TokenKind::Identifier) &&
          (t.text == "CLASSDESC_ACCESS" || t.text == "CLASSDESC_ACCESS_TEMPLATE") &&
          next().is_punct("(")) {
        skip_statement();
        continue;
      }
      if (t.is_keyword("class") || t.is_keyword("struct") || t.is_keyword("union")) {
        parse_nested_class_or_member(decl, access);
        continue;
      }
      if (t.is_keyword("typedef")) {
        warn("in-class typedef is not supported; skipped", t);
        skip_statement();
        continue;
      }
      if (t.is_keyword("template")) {
        warn("member template is not supported; skipped", t);
        advance();
        skip_statement();
        continue;
      }
      if (t.is_keyword("using") || t.is_keyword("enum")) {
        warn("unsupported construct in class body; skipped", t);
        skip_statement();
        continue;
      }
      if (t.is_keyword("operator") ||
          (t.is_punct("~") && next(2).is_punct("(")) ||
          word_like(t) == false) {
        if (t.is_keyword("operator"))
          warn("operator member is not supported; skipped", t);
        if (t.is_punct("~")) {
          // Destructor: a function member that no action visits.
          Member m;
          m.name = "~" + next().text;
          m.access = access;
          m.serializable = false;
          m.is_function = true;
          decl.members.push_back(std::move(m));
        }
        skip_statement();
        continue;
      }
      parse_member_statement(decl, access);
    }

    bool member_nonpublic = false;
    for (const auto& m : decl.members)
      if (m.access != Access::Public) member_nonpublic = true;
    decl.has_private_or_protected = saw_nonpublic_label || member_nonpublic;
    return true;
  }

  void parse_nested_class_or_member(ClassDecl& outer, Access access) {
    // Distinguish a nested definition from an elaborated member type by
    // looking past the optional tag: '{' or ':' means definition.
    std::size_t save = i_;
    advance();  // class-key
    while (cur().is(TokenKind::Identifier)) {
      advance();
      if (cur().is_punct("::"))
        advance();
      else
        break;
    }
    bool is_definition = cur().is_punct("{") || cur().is_punct(":");
    bool is_forward = cur().is_punct(";");
    i_ = save;

    if (is_forward) {
      advance();
      skip_statement();
      return;
    }
    if (!is_definition) {
      // 'struct S member;': elaborated type member.
      advance();  // drop the class-key; the type name follows
      parse_member_statement(outer, access);
      return;
    }

    std::size_t head = i_;
    const Token& kw = cur();
    advance();
    std::string tag;
    while (cur().is(TokenKind::Identifier)) {
      if (!tag.empty()) tag += "::";
      tag += cur().text;
      advance();
      if (cur().is_punct("::") && next().is(TokenKind::Identifier))
        advance();
      else
        break;
    }
    i_ = head;

    if (tag.empty()) {
      warn("anonymous nested " + std::string(kw.text) + " is not supported; skipped",
           kw);
      advance();
      skip_statement();
      return;
    }

    std::string qualified = outer.name.empty() ? tag : outer.name + "::" + tag;
    auto nested_name = parse_class_head_and_body({}, qualified);
    if (!nested_name) {
      skip_statement();
      return;
    }
    // 'struct S { ... } m;': declarators after the body are members of the
    // nested type.
    while (cur().is(TokenKind::Identifier)) {
      Member m;
      m.name = cur().text;
      m.type = TypeExpr::named(*nested_name);
      m.access = access;
      outer.members.push_back(std::move(m));
      advance();
      if (cur().is_punct(","))
        advance();
      else
        break;
    }
    if (cur().is_punct(";")) advance();
  }

  static std::string last_component(const std::string& qualified) {
    auto p = qualified.rfind("::");
    return p == std::string::npos ? qualified : qualified.substr(p + 2);
  }

  // Nested classes register under qualified names, so a member spelled with
  // the short name inside (or below) the enclosing class must resolve to
  // the qualified one. Searches the enclosing scope chain innermost-first.
  std::string resolve_nested(const std::string& enclosing,
                             const std::string& name) const {
    std::string scope = enclosing;
    while (!scope.empty()) {
      std::string candidate = scope + "::" + name;
      for (const auto& d : out_)
        if (d.variant == RawDecl::Variant::Class &&
            d.class_decl.name == candidate)
          return candidate;
      auto p = scope.rfind("::");
      scope = p == std::string::npos ? std::string{} : scope.substr(0, p);
    }
    return {};
  }

  // --- member declarations ----------------------------------------------

  void parse_member_statement(ClassDecl& decl, Access access) {
    const Token& start = cur();
    bool is_static = false;

    while (cur().is_keyword("static") || cur().is_keyword("const") ||
           cur().is_keyword("mutable") || cur().is_keyword("volatile") ||
           cur().is_keyword("inline") || cur().is_keyword("constexpr") ||
           cur().is_keyword("explicit") || cur().is_keyword("virtual")) {
      if (cur().is_keyword("static")) is_static = true;
      advance();
    }

    // Destructor, possibly behind 'virtual'.
    if (cur().is_punct("~") && next(2).is_punct("(")) {
      Member m;
      m.name = "~" + next().text;
      m.access = access;
      m.serializable = false;
      m.is_function = true;
      decl.members.push_back(std::move(m));
      skip_statement();
      return;
    }
    if (cur().is_keyword("operator")) {
      warn("operator member is not supported; skipped", cur());
      skip_statement();
      return;
    }

    // Constructor: the class's own (unqualified) name followed by '('.
    if (cur().is(TokenKind::Identifier) && cur().text == last_component(decl.name) &&
        next().is_punct("(")) {
      Member m;
      m.name = cur().text;
      m.access = access;
      m.serializable = false;
      m.is_function = true;
      advance();
      consume_paren_group();
      finish_function_tail();
      decl.members.push_back(std::move(m));
      return;
    }

    auto base_type = parse_type_spec();
    if (!base_type) {
      warn("unrecognized member declaration; skipped", start);
      skip_statement();
      return;
    }
    if (base_type->is_named() && !decl.name.empty()) {
      std::string qualified = resolve_nested(decl.name, base_type->name());
      if (!qualified.empty()) *base_type = TypeExpr::named(qualified);
    }

    bool first = true;
    while (true) {
      TypeExpr type = *base_type;

      // Pointer declarator prefixes.
      while (true) {
        if (cur().is_punct("*")) {
          advance();
          while (cur().is_keyword("const") || cur().is_keyword("volatile"))
            advance();
          type = TypeExpr::pointer(type, PointerKind::Generic);
          continue;
        }
        // 'C::*' or 'A::B::*': pointer to member.
        if (cur().is(TokenKind::Identifier)) {
          std::size_t save = i_;
          while (cur().is(TokenKind::Identifier) && next().is_punct("::")) {
            advance();
            advance();
          }
          if (cur().is_punct("*") && i_ != save) {
            advance();
            type = TypeExpr::pointer(type, PointerKind::MemberPointer);
            continue;
          }
          i_ = save;
        }
        break;
      }

      if (cur().is_punct("&") || (cur().is_punct("&") && next().is_punct("&"))) {
        warn("reference members are not supported; skipped", cur());
        skip_statement();
        return;
      }

      // Function-pointer data member: 'ret (*name)(args);'
      if (cur().is_punct("(") && next().is_punct("*") &&
          next(2).is(TokenKind::Identifier) && next(3).is_punct(")")) {
        std::string fname = next(2).text;
        consume_paren_group();
        if (cur().is_punct("(")) consume_paren_group();
        Member m;
        m.name = fname;
        m.type = TypeExpr::pointer(std::nullopt, PointerKind::Generic);
        m.access = access;
        m.is_static = is_static;
        m.serializable = !is_static;
        decl.members.push_back(std::move(m));
        if (!finish_declarator_separator(decl)) return;
        if (cur().is_punct(";")) {
          advance();
          return;
        }
        continue;
      }

      if (cur().is_keyword("operator")) {
        warn("operator member is not supported; skipped", cur());
        skip_statement();
        return;
      }
      if (!cur().is(TokenKind::Identifier)) {
        if (first)
          warn("unrecognized member declaration; skipped", start);
        else
          warn("malformed declarator list; remainder skipped", cur());
        skip_statement();
        return;
      }
      std::string name = cur().text;
      advance();

      // Bitfield: 'int b : 3;'
      if (cur().is_punct(":") && !cur().is_punct("::")) {
        error("bitfield member '" + name + "' is not supported", cur());
        skip_statement();
        return;
      }

      // Member function.
      if (cur().is_punct("(")) {
        auto params = consume_paren_group();
        Member m;
        m.name = std::move(name);
        m.type = type;
        m.access = access;
        m.serializable = false;
        m.is_function = true;
        m.is_static = is_static;
        m.fn_signature = classify_signature(params);
        decl.members.push_back(std::move(m));
        finish_function_tail();
        return;
      }

      // Array extents.
      bool bad = false;
      std::vector<std::size_t> extents;
      while (cur().is_punct("[")) {
        advance();
        if (cur().is(TokenKind::IntegerLiteral) && next().is_punct("]")) {
          const std::string& txt = cur().text;
          bool digits = !txt.empty();
          for (char c : txt)
            if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
          std::size_t extent = digits ? std::strtoull(txt.c_str(), nullptr, 10) : 0;
          if (!digits || extent == 0) {
            warn("array extent of member '" + name +
                     "' is not a positive integer; member skipped",
                 cur());
            bad = true;
            break;
          }
          extents.push_back(extent);
          advance();
          advance();
        } else {
          warn("array extent of member '" + name +
                   "' is not an integer literal; member skipped",
               cur());
          bad = true;
          break;
        }
      }
      if (bad) {
        skip_statement();
        return;
      }
      for (auto it = extents.rbegin(); it != extents.rend(); ++it)
        type = TypeExpr::array(type, *it);

      // Default member initializer.
      if (cur().is_punct("=") || cur().is_punct("{")) {
        int depth = 0;
        while (!at_end()) {
          const Token& t = cur();
          if (t.is_punct("{") || t.is_punct("(") || t.is_punct("[")) ++depth;
          if (t.is_punct("}") || t.is_punct(")") || t.is_punct("]")) {
            if (depth == 0) break;
            --depth;
          }
          if ((t.is_punct(",") || t.is_punct(";")) && depth == 0) break;
          advance();
        }
      }

      Member m;
      m.name = std::move(name);
      m.type = std::move(type);
      m.access = access;
      m.is_static = is_static;
      m.serializable = !is_static;
      decl.members.push_back(std::move(m));

      if (!finish_declarator_separator(decl)) return;
      if (cur().is_punct(";")) {
        advance();
        return;
      }
      first = false;
    }
  }

  // After one declarator: expect ',' (more declarators) or ';'. Returns
  // false when the statement had to be abandoned.
  bool finish_declarator_separator(ClassDecl&) {
    if (cur().is_punct(",")) {
      advance();
      return true;
    }
    if (cur().is_punct(";")) return true;
    warn("malformed member declaration; remainder skipped", cur());
    skip_statement();
    return false;
  }

  // Skips everything after a member function's parameter list: cv/ref
  // qualifiers, '= 0', ': init-list', and '{ body }' or ';'.
  void finish_function_tail() {
    while (!at_end()) {
      const Token& t = cur();
      if (t.is_punct(";")) {
        advance();
        return;
      }
      if (t.is_punct("{")) {
        advance();
        skip_until_depth_zero(1);
        return;
      }
      if (t.is_punct("}")) return;  // malformed; let the class loop recover
      if (t.is_punct("(")) {
        consume_paren_group();
        continue;
      }
      advance();
    }
  }

  static FnSignature classify_signature(const std::vector<Token>& params) {
    if (params.empty()) return FnSignature::NoArgs;
    if (params.size() == 1 && params[0].is_keyword("void"))
      return FnSignature::NoArgs;
    // (int argc, char* argv[])  or  (int argc, char** argv)
    auto word = [&](std::size_t k, const char* text) {
      return k < params.size() && params[k].text == text;
    };
    auto ident = [&](std::size_t k) {
      return k < params.size() && params[k].is(TokenKind::Identifier);
    };
    if (word(0, "int") && ident(1) && word(2, ",") && word(3, "char")) {
      if (params.size() == 8 && word(4, "*") && ident(5) && word(6, "[") &&
          word(7, "]"))
        return FnSignature::ArgcArgv;
      if (params.size() == 7 && word(4, "*") && word(5, "*") && ident(6))
        return FnSignature::ArgcArgv;
    }
    return FnSignature::None;
  }

  // Builtin type combination or a (possibly qualified, possibly templated)
  // type name. Returns nullopt when no type is recognizable here.
  std::optional<TypeExpr> parse_type_spec() {
    static const char* builtin[] = {"unsigned", "signed", "short", "long",
                                    "int",      "char",   "bool",  "float",
                                    "double",   "void",   "wchar_t"};
    auto is_builtin = [&](const Token& t) {
      if (!t.is(TokenKind::Keyword)) return false;
      for (const char* b : builtin)
        if (t.text == b) return true;
      return false;
    };

    if (is_builtin(cur())) {
      bool uns = false, sgn = false, flt = false, dbl = false, vd = false,
           boo = false, chr = false, wchar = false;
      int longs = 0, shorts = 0, ints = 0;
      const Token& first = cur();
      while (is_builtin(cur())) {
        const std::string& s = cur().text;
        if (s == "unsigned") uns = true;
        if (s == "signed") sgn = true;
        if (s == "short") ++shorts;
        if (s == "long") ++longs;
        if (s == "int") ++ints;
        if (s == "char") chr = true;
        if (s == "bool") boo = true;
        if (s == "float") flt = true;
        if (s == "double") dbl = true;
        if (s == "void") vd = true;
        if (s == "wchar_t") wchar = true;
        advance();
      }
      if (dbl && longs > 0) {
        error("'long double' has no machine-independent encoding; not supported",
              first);
        return std::nullopt;
      }
      if (wchar) {
        error("'wchar_t' is not supported", first);
        return std::nullopt;
      }
      if (boo) return TypeExpr::primitive(PrimitiveKind::Bool);
      if (flt) return TypeExpr::primitive(PrimitiveKind::Float32);
      if (dbl) return TypeExpr::primitive(PrimitiveKind::Float64);
      if (vd) return TypeExpr::named("void");
      if (chr) {
        if (uns) return TypeExpr::primitive(PrimitiveKind::UInt8);
        if (sgn) return TypeExpr::primitive(PrimitiveKind::SInt8);
        return TypeExpr::primitive(PrimitiveKind::Char);
      }
      if (shorts > 0)
        return TypeExpr::primitive(uns ? PrimitiveKind::UInt16
                                       : PrimitiveKind::SInt16);
      if (longs > 0)
        return TypeExpr::primitive(uns ? PrimitiveKind::UInt64
                                       : PrimitiveKind::SInt64);
      // 'int', bare 'signed' / 'unsigned'.
      (void)ints;
      return TypeExpr::primitive(uns ? PrimitiveKind::UInt32
                                     : PrimitiveKind::SInt32);
    }

    // Elaborated type: 'struct S member;' after qualifiers.
    if ((cur().is_keyword("class") || cur().is_keyword("struct") ||
         cur().is_keyword("union")) &&
        next().is(TokenKind::Identifier)) {
      advance();
      std::string name = read_qualified_type_name();
      if (name.empty()) return std::nullopt;
      return TypeExpr::named(name);
    }

    if (cur().is(TokenKind::Identifier)) {
      // Leave a member-pointer class qualifier ('C::*') for the declarator.
      if (next().is_punct("::") && next(2).is_punct("*")) return std::nullopt;
      std::string name = read_qualified_type_name();
      if (name.empty()) return std::nullopt;
      return TypeExpr::named(name);
    }
    return std::nullopt;
  }

  // --- typedefs ---------------------------------------------------------

  void parse_typedef() {
    const Token& start = cur();
    SourcePos begin = pos_of(start);
    advance();  // 'typedef'

    if (cur().is_keyword("class") || cur().is_keyword("struct") ||
        cur().is_keyword("union")) {
      parse_typedef_of_class(begin);
      return;
    }

    auto base = parse_type_spec();
    if (!base) {
      warn("unsupported typedef; skipped", start);
      skip_statement();
      return;
    }

    // Function-pointer typedef: 'typedef ret (*name)(args);'
    if (cur().is_punct("(") && next().is_punct("*") &&
        next(2).is(TokenKind::Identifier) && next(3).is_punct(")")) {
      std::string name = next(2).text;
      consume_paren_group();
      if (cur().is_punct("(")) consume_paren_group();
      SourcePos end = pos_of(cur());
      if (cur().is_punct(";")) advance();
      out_.push_back(RawDecl::make_typedef(
          TypedefDecl{qualify(name),
                      TypeExpr::pointer(std::nullopt, PointerKind::Generic)},
          begin, end));
      return;
    }

    TypeExpr type = *base;
    while (cur().is_punct("*")) {
      advance();
      while (cur().is_keyword("const") || cur().is_keyword("volatile")) advance();
      type = TypeExpr::pointer(type, PointerKind::Generic);
    }
    if (!cur().is(TokenKind::Identifier)) {
      warn("unsupported typedef; skipped", start);
      skip_statement();
      return;
    }
    std::string name = cur().text;
    advance();

    std::vector<std::size_t> extents;
    while (cur().is_punct("[") && next().is(TokenKind::IntegerLiteral) &&
           next(2).is_punct("]")) {
      extents.push_back(std::strtoull(next().text.c_str(), nullptr, 10));
      advance();
      advance();
      advance();
    }
    for (auto it = extents.rbegin(); it != extents.rend(); ++it) {
      if (*it == 0) {
        warn("zero-extent array typedef; skipped", start);
        skip_statement();
        return;
      }
      type = TypeExpr::array(type, *it);
    }

    SourcePos end = pos_of(cur());
    if (cur().is_punct(";"))
      advance();
    else {
      warn("unsupported typedef declarator; remainder skipped", cur());
      skip_statement();
    }
    out_.push_back(
        RawDecl::make_typedef(TypedefDecl{qualify(name), std::move(type)}, begin, end));
  }

  void parse_typedef_of_class(SourcePos begin) {
    const Token& kw = cur();
    advance();
    std::string tag;
    while (cur().is(TokenKind::Identifier)) {
      if (!tag.empty()) tag += "::";
      tag += cur().text;
      advance();
      if (cur().is_punct("::") && next().is(TokenKind::Identifier))
        advance();
      else
        break;
    }

    if (cur().is_punct("{")) {
      // Definition inside the typedef; anonymous structs take the typedef
      // name as their own.
      ClassDecl decl;
      decl.kind = kw.is_keyword("class")   ? ClassKind::Class
                  : kw.is_keyword("struct") ? ClassKind::Struct
                                            : ClassKind::Union;
      decl.name = tag.empty() ? std::string{} : qualify(tag);
      advance();
      if (!parse_class_body(decl, kw)) return;
      if (!cur().is(TokenKind::Identifier)) {
        warn("typedef of unnamed " + std::string(class_kind_name(decl.kind)) +
                 " lacks a name; skipped",
             kw);
        skip_statement();
        return;
      }
      std::string alias = qualify(cur().text);
      advance();
      SourcePos end = pos_of(cur());
      if (cur().is_punct(";")) advance();

      if (decl.name.empty()) {
        decl.name = alias;  // synthesized name
        out_.push_back(RawDecl::make_class(std::move(decl), begin, end));
      } else {
        std::string tag_name = decl.name;
        out_.push_back(RawDecl::make_class(std::move(decl), begin, end));
        if (alias != tag_name)
          out_.push_back(RawDecl::make_typedef(
              TypedefDecl{alias, TypeExpr::named(tag_name)}, begin, end));
      }
      return;
    }

    // 'typedef struct Tag Alias;'
    if (!tag.empty() && cur().is(TokenKind::Identifier)) {
      std::string alias = qualify(cur().text);
      advance();
      SourcePos end = pos_of(cur());
      if (cur().is_punct(";")) advance();
      out_.push_back(RawDecl::make_typedef(
          TypedefDecl{alias, TypeExpr::named(tag)}, begin, end));
      return;
    }

    warn("unsupported typedef; skipped", kw);
    skip_statement();
  }

  const std::vector<Token>& toks_;
  Diagnostics& diags_;
  std::size_t i_ = 0;
  std::vector<RawDecl> out_;
  std::vector<std::string> scopes_;
};

}  // namespace detail

/// Parse a lexed translation unit into raw declarations.
inline ParseResult parse_unit(const std::vector<Token>& tokens) {
  ParseResult result;
  detail::Parser parser(tokens, result.diagnostics);
  result.decls = parser.run();
  return result;
}

/// Convenience: lex and parse in one step, merging diagnostics.
inline ParseResult parse_source(std::string_view source) {
  LexResult lexed = tokenize(source);
  ParseResult result = parse_unit(lexed.tokens);
  result.diagnostics.insert(result.diagnostics.begin(),
                            lexed.diagnostics.begin(), lexed.diagnostics.end());
  return result;
}

}  // namespace classdesc

#endif  // CLASSDESC_PARSER_HPP
