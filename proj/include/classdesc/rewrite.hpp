#ifndef CLASSDESC_REWRITE_HPP
#define CLASSDESC_REWRITE_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "classdesc/diagnostics.hpp"
#include "classdesc/lexer.hpp"

namespace classdesc {

struct RewriteEdit {
  int line = 0;  // line the inserted macro call lands on
  std::string inserted;
};

struct RewriteResult {
  std::string output;
  std::vector<RewriteEdit> edits;
  bool changed = false;
  Diagnostics diagnostics;
};

namespace detail {

struct ClassCtx {
  std::string name;          // as written, template arguments excluded
  bool is_template = false;
  bool is_class_kw = false;  // 'class' (default private) vs 'struct'
  std::size_t brace_offset = 0;
  int brace_line = 0;
  int body_depth = 0;
  bool saw_nonpublic_label = false;
  bool saw_token_before_label = false;
  bool saw_label = false;
  bool has_macro = false;
};

struct Insertion {
  std::size_t after_offset = 0;  // insert right after this byte
  int brace_line = 0;
  std::string name;
  bool is_template = false;
};

}  // namespace detail

/// Insert CLASSDESC_ACCESS / CLASSDESC_ACCESS_TEMPLATE calls into class and
/// struct definitions that have private or protected regions. Works on a
/// token-level scan, so full parseability is not required; everything
/// outside the inserted lines is preserved byte-for-byte. Idempotent.
inline RewriteResult insert_access_macros(const std::string& source) {
  RewriteResult result;
  result.output = source;

  LexResult lexed = tokenize(source);
  const std::vector<Token>& toks = lexed.tokens;

  std::vector<detail::Insertion> insertions;
  std::vector<detail::ClassCtx> stack;
  int depth = 0;
  bool after_enum = false;    // suppress the class-key of 'enum class'
  bool pending_template = false;

  auto is_class_key = [](const Token& t) {
    return t.is_keyword("class") || t.is_keyword("struct");
  };

  std::size_t i = 0;
  while (i < toks.size() && !toks[i].is(TokenKind::EndOfInput)) {
    const Token& t = toks[i];

    // Bookkeeping visible to the innermost open class body.
    if (!stack.empty() && depth == stack.back().body_depth &&
        !t.is_punct("}") && !t.is_punct("{")) {
      detail::ClassCtx& ctx = stack.back();
      bool is_label = (t.is_keyword("private") || t.is_keyword("protected") ||
                       t.is_keyword("public")) &&
                      i + 1 < toks.size() && toks[i + 1].is_punct(":");
      if (is_label) {
        ctx.saw_label = true;
        if (!t.is_keyword("public")) ctx.saw_nonpublic_label = true;
      } else if (t.is(TokenKind::Identifier) &&
                 (t.text == "CLASSDESC_ACCESS" ||
                  t.text == "CLASSDESC_ACCESS_TEMPLATE") &&
                 i + 1 < toks.size() && toks[i + 1].is_punct("(")) {
        // Any existing access macro in this body keeps us out; comparing
        // the argument would misfire on renamed classes, and a second
        // macro with a different argument would be wrong anyway.
        ctx.has_macro = true;
      } else if (!ctx.saw_label) {
        ctx.saw_token_before_label = true;
      }
    }

    if (t.is_punct("{")) {
      ++depth;
      ++i;
      continue;
    }
    if (t.is_punct("}")) {
      if (!stack.empty() && depth == stack.back().body_depth) {
        detail::ClassCtx ctx = stack.back();
        stack.pop_back();
        bool needs_access =
            ctx.saw_nonpublic_label ||
            (ctx.is_class_kw && ctx.saw_token_before_label);
        if (needs_access && !ctx.has_macro && !ctx.name.empty())
          insertions.push_back(detail::Insertion{ctx.brace_offset, ctx.brace_line,
                                                 ctx.name, ctx.is_template});
      }
      if (depth > 0) --depth;
      ++i;
      continue;
    }

    if (t.is_keyword("enum")) {
      after_enum = true;
      ++i;
      continue;
    }
    if (t.is_keyword("template")) {
      // Only a directly following class-head makes this a template class;
      // reset below if anything else shows up.
      pending_template = true;
      ++i;
      // Skip the parameter list so 'class T' inside <> is not mistaken for
      // a class-head.
      if (i < toks.size() && toks[i].is_punct("<")) {
        int angle = 0;
        while (i < toks.size() && !toks[i].is(TokenKind::EndOfInput)) {
          if (toks[i].is_punct("<")) ++angle;
          if (toks[i].is_punct(">")) {
            --angle;
            if (angle == 0) {
              ++i;
              break;
            }
          }
          ++i;
        }
      }
      continue;
    }

    if (is_class_key(t) && !after_enum) {
      bool is_template = pending_template;
      pending_template = false;
      bool is_class_kw = t.is_keyword("class");
      ++i;
      std::string name;
      while (i < toks.size() && toks[i].is(TokenKind::Identifier)) {
        if (!name.empty()) name += "::";
        name += toks[i].text;
        ++i;
        if (i < toks.size() && toks[i].is_punct("::"))
          ++i;
        else
          break;
      }
      // Template specializations ('class Foo<int>') keep their bare name.
      if (i < toks.size() && toks[i].is_punct("<")) {
        int angle = 0;
        while (i < toks.size() && !toks[i].is(TokenKind::EndOfInput)) {
          if (toks[i].is_punct("<")) ++angle;
          if (toks[i].is_punct(">")) {
            --angle;
            if (angle == 0) {
              ++i;
              break;
            }
          }
          ++i;
        }
      }
      if (i < toks.size() && toks[i].is_keyword("final")) ++i;
      // Scan the (optional) base clause for the opening brace.
      while (i < toks.size() && !toks[i].is(TokenKind::EndOfInput) &&
             !toks[i].is_punct("{") && !toks[i].is_punct(";") &&
             !toks[i].is_punct("}"))
        ++i;
      if (i < toks.size() && toks[i].is_punct("{")) {
        ++depth;
        detail::ClassCtx ctx;
        ctx.name = std::move(name);
        ctx.is_template = is_template;
        ctx.is_class_kw = is_class_kw;
        ctx.brace_offset = toks[i].offset;
        ctx.brace_line = toks[i].line;
        ctx.body_depth = depth;
        stack.push_back(std::move(ctx));
        ++i;
      }
      continue;
    }

    after_enum = after_enum && is_class_key(t);  // consumed exactly once
    pending_template = false;
    ++i;
  }

  if (!stack.empty()) {
    result.diagnostics.push_back(Diagnostic{
        Severity::Error,
        "unbalanced braces; no rewrites applied (definition of '" +
            stack.back().name + "' never closes)",
        stack.back().brace_line, 1, {}});
    return result;
  }

  if (insertions.empty()) return result;

  // Inserted line breaks follow the file's own convention.
  const std::string nl =
      source.find("\r\n") != std::string::npos ? "\r\n" : "\n";

  std::sort(insertions.begin(), insertions.end(),
            [](const detail::Insertion& a, const detail::Insertion& b) {
              return a.after_offset < b.after_offset;
            });

  // Apply back to front so earlier offsets stay valid.
  std::string text = source;
  for (auto it = insertions.rbegin(); it != insertions.rend(); ++it) {
    std::size_t pos = it->after_offset + 1;  // just past '{'
    std::string macro = (it->is_template ? "CLASSDESC_ACCESS_TEMPLATE("
                                         : "CLASSDESC_ACCESS(") +
                        it->name + ");";

    std::size_t eol = text.find('\n', pos);
    std::string rest_of_line =
        text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    bool code_follows = false;
    for (char c : rest_of_line)
      if (c != ' ' && c != '\t' && c != '\r') code_follows = true;

    std::string inserted;
    if (code_follows || eol == std::string::npos) {
      // 'class C { int a; };': push the trailing code onto its own line.
      inserted = nl + macro + nl;
    } else {
      std::string indent;
      for (std::size_t k = eol + 1; k < text.size(); ++k) {
        if (text[k] == ' ' || text[k] == '\t')
          indent += text[k];
        else
          break;
      }
      inserted = nl + indent + macro;
    }
    text.insert(pos, inserted);
  }

  result.output = std::move(text);
  result.changed = true;
  for (const auto& ins : insertions) {
    std::string macro = (ins.is_template ? "CLASSDESC_ACCESS_TEMPLATE("
                                         : "CLASSDESC_ACCESS(") +
                        ins.name + ");";
    result.edits.push_back(RewriteEdit{ins.brace_line + 1, macro});
  }
  return result;
}

struct FixSummary {
  std::size_t scanned = 0;
  std::size_t patched = 0;
  Diagnostics diagnostics;
};

/// Scan every regular file under corpus_dir; files that insert_access_macros
/// changes are written, patched, to the mirrored path under out_dir.
/// Unchanged files are not copied. Per-file problems are warnings; the scan
/// continues.
inline FixSummary fix_headers(const std::filesystem::path& corpus_dir,
                              const std::filesystem::path& out_dir) {
  FixSummary summary;

  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (std::filesystem::recursive_directory_iterator it(corpus_dir, ec), end;
       it != end && !ec; it.increment(ec)) {
    if (it->is_regular_file()) files.push_back(it->path());
  }
  if (ec) {
    summary.diagnostics.push_back(Diagnostic{
        Severity::Warning,
        "while scanning '" + corpus_dir.string() + "': " + ec.message(), 0, 0, {}});
  }
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    ++summary.scanned;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      summary.diagnostics.push_back(Diagnostic{
          Severity::Warning, "cannot read '" + path.string() + "'; skipped", 0, 0, {}});
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string source = buf.str();

    RewriteResult r = insert_access_macros(source);
    for (auto d : r.diagnostics) {
      // A file that defeats the brace scan is skipped, not fatal, here.
      d.severity = Severity::Warning;
      d.file = path.string();
      summary.diagnostics.push_back(std::move(d));
    }
    if (!r.changed) continue;

    std::filesystem::path rel = std::filesystem::relative(path, corpus_dir);
    std::filesystem::path dest = out_dir / rel;
    std::filesystem::create_directories(dest.parent_path(), ec);
    std::ofstream out(dest, std::ios::binary);
    if (!out) {
      summary.diagnostics.push_back(Diagnostic{
          Severity::Warning, "cannot write '" + dest.string() + "'", 0, 0, {}});
      continue;
    }
    out.write(r.output.data(), static_cast<std::streamsize>(r.output.size()));
    ++summary.patched;
  }
  return summary;
}

}  // namespace classdesc

#endif  // CLASSDESC_REWRITE_HPP
