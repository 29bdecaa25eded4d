#ifndef CLASSDESC_CLI_HPP
#define CLASSDESC_CLI_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "classdesc/diagnostics.hpp"
#include "classdesc/emit.hpp"
#include "classdesc/ir.hpp"
#include "classdesc/pack.hpp"
#include "classdesc/parser.hpp"
#include "classdesc/plan.hpp"
#include "classdesc/registry.hpp"
#include "classdesc/rewrite.hpp"
#include "classdesc/value.hpp"
#include "classdesc/values_file.hpp"

namespace classdesc {
namespace cli {

namespace detail {

inline bool read_file(const std::filesystem::path& path, std::string& out,
                      std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot read '" << path.string() << "'\n";
    return false;
  }
  out.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  return true;
}

// Write via a sibling temp file and rename, so a failed run never leaves a
// half-written output behind.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

inline void print_diagnostics(const Diagnostics& diags, std::ostream& err) {
  for (const auto& d : diags) err << format_diagnostic(d) << "\n";
}

// Parse the given headers (each diagnosed under its own name) and build one
// shared registry. Remembers which classes each file declared so gen can
// emit per-header descriptor files. Returns false when any error occurred;
// diagnostics are printed either way.
struct ParsedCorpus {
  Registry registry;
  // One entry per input, in input order: class names in declaration order.
  std::vector<std::pair<std::filesystem::path, std::vector<std::string>>> files;
};

inline bool load_corpus(const std::vector<std::string>& paths,
                        ParsedCorpus& corpus, std::ostream& err) {
  Diagnostics all;
  std::vector<RawDecl> decls;
  bool io_failed = false;
  for (const auto& p : paths) {
    std::string text;
    if (!read_file(p, text, err)) {
      io_failed = true;
      continue;
    }
    ParseResult r = parse_source(text);
    for (auto& d : r.diagnostics) d.file = p;
    all.insert(all.end(), r.diagnostics.begin(), r.diagnostics.end());

    std::vector<std::string> class_names;
    for (const auto& d : r.decls)
      if (d.variant == RawDecl::Variant::Class && !d.class_decl.name.empty())
        class_names.push_back(d.class_decl.name);
    corpus.files.emplace_back(p, std::move(class_names));
    decls.insert(decls.end(), r.decls.begin(), r.decls.end());
  }
  Diagnostics reg_diags;
  corpus.registry = build_registry(decls, reg_diags);
  all.insert(all.end(), reg_diags.begin(), reg_diags.end());
  print_diagnostics(all, err);
  return !io_failed && !has_errors(all);
}

inline int run_gen(const std::vector<std::string>& inputs,
                   const std::vector<std::string>& actions,
                   const std::filesystem::path& out_dir, int verbosity,
                   std::ostream& /*out*/, std::ostream& err) {
  // Sorted, deduplicated input order keeps output byte-identical no matter
  // how the shell globbed the arguments.
  std::vector<std::string> paths = inputs;
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());

  ParsedCorpus corpus;
  if (!load_corpus(paths, corpus, err)) return 1;

  // Build every output in memory first; only a fully successful run writes.
  std::vector<std::pair<std::filesystem::path, std::string>> outputs;
  std::vector<std::string> seen_stems;
  Diagnostics plan_diags;
  for (const auto& [path, class_names] : corpus.files) {
    std::string stem = path.stem().string();
    if (std::find(seen_stems.begin(), seen_stems.end(), stem) != seen_stems.end()) {
      err << "error: duplicate output stem '" << stem << "'\n";
      return 1;
    }
    seen_stems.push_back(stem);
    for (const auto& action : actions) {
      std::vector<DescriptorPlan> plans;
      for (const auto& name : class_names) {
        if (corpus.registry.is_omitted(action, name)) continue;
        const ClassDecl* cls = corpus.registry.find_class(name);
        if (!cls) continue;  // dropped by the registry (already diagnosed)
        plans.push_back(plan(*cls, corpus.registry, action, plan_diags));
      }
      outputs.emplace_back(out_dir / (stem + "." + action + ".cd"),
                           emit_descriptor_file(plans, action));
    }
  }
  outputs.emplace_back(out_dir / "classdesc_access.h", emit_access_macros(actions));

  print_diagnostics(plan_diags, err);
  if (has_errors(plan_diags)) return 1;

  for (const auto& [path, content] : outputs) {
    atomic_write(path, content);
    if (verbosity > 0) err << "wrote " << path.string() << "\n";
  }
  return 0;
}

inline int run_insert_friend(const std::string& input, const std::string& output,
                             int verbosity, std::ostream& err) {
  std::string text;
  if (!read_file(input, text, err)) return 1;
  RewriteResult r = insert_access_macros(text);
  for (auto& d : r.diagnostics) d.file = input;
  print_diagnostics(r.diagnostics, err);
  if (has_errors(r.diagnostics)) return 1;

  std::filesystem::path dest = output.empty() ? input : output;
  // In place and unchanged: leave the file untouched.
  if (r.changed || dest != std::filesystem::path(input))
    atomic_write(dest, r.output);
  if (verbosity > 0)
    err << "patched " << r.edits.size() << " class(es) in " << input << "\n";
  return 0;
}

inline int run_fix_includes(const std::filesystem::path& corpus,
                            const std::filesystem::path& out_dir,
                            std::ostream& out, std::ostream& err) {
  if (!std::filesystem::is_directory(corpus)) {
    err << "error: '" << corpus.string() << "' is not a directory\n";
    return 1;
  }
  FixSummary summary = fix_headers(corpus, out_dir);
  print_diagnostics(summary.diagnostics, err);
  out << "scanned " << summary.scanned << " file(s), patched " << summary.patched
      << "\n";
  return has_errors(summary.diagnostics) ? 1 : 0;
}

inline int run_inspect(const std::vector<std::string>& inputs, std::ostream& out,
                       std::ostream& err) {
  ParsedCorpus corpus;
  if (!load_corpus(inputs, corpus, err)) return 1;
  out << ir_export(corpus.registry);
  return 0;
}

// Shared front half of pack/unpack: parse the header, apply --single-obj
// marks, and check the requested class is usable.
inline bool load_packing_context(const std::string& header,
                                 const std::string& class_name,
                                 const std::vector<std::string>& single_obj,
                                 ParsedCorpus& corpus, std::ostream& err) {
  if (!load_corpus({header}, corpus, err)) return false;
  for (const auto& n : single_obj) corpus.registry.mark_single_object(n);
  const ClassDecl* cls = corpus.registry.find_class(class_name);
  if (!cls) {
    err << "error: class '" << class_name << "' is not declared in '" << header
        << "'\n";
    return false;
  }
  if (cls->is_template()) {
    err << "error: cannot pack template class '" << class_name << "'\n";
    return false;
  }
  return true;
}

inline int run_pack(const std::string& header, const std::string& class_name,
                    const std::string& values_path, const std::string& blob_path,
                    Mode mode, const std::vector<std::string>& single_obj,
                    std::ostream& err) {
  ParsedCorpus corpus;
  if (!load_packing_context(header, class_name, single_obj, corpus, err))
    return 1;
  std::string values_text;
  if (!read_file(values_path, values_text, err)) return 1;

  try {
    TypeExpr type = TypeExpr::named(class_name);
    Value v = read_values(values_text, type, corpus.registry);
    PackBuffer buf(mode);
    pack(buf, "", v, type, corpus.registry);
    for (const auto& w : buf.warnings) err << "warning: " << w << "\n";
    atomic_write(blob_path,
                 std::string(buf.bytes.begin(), buf.bytes.end()));
  } catch (const PackError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

inline int run_unpack(const std::string& header, const std::string& class_name,
                      const std::string& blob_path, const std::string& out_path,
                      Mode mode, const std::vector<std::string>& single_obj,
                      std::ostream& out, std::ostream& err) {
  ParsedCorpus corpus;
  if (!load_packing_context(header, class_name, single_obj, corpus, err))
    return 1;
  std::string blob;
  if (!read_file(blob_path, blob, err)) return 1;

  try {
    TypeExpr type = TypeExpr::named(class_name);
    PackBuffer buf(mode);
    buf.bytes.assign(blob.begin(), blob.end());
    Value v = unpack(buf, "", type, corpus.registry);
    if (buf.remaining() != 0) {
      err << "error: " << buf.remaining() << " trailing byte(s) after unpacking '"
          << class_name << "'\n";
      return 1;
    }
    std::string text = write_values(v, type, corpus.registry);
    if (out_path.empty())
      out << text;
    else
      atomic_write(out_path, text);
  } catch (const PackError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

inline bool valid_action_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace detail

/// Entry point for the classdesc tool. `args` excludes the program name.
/// Returns 0 on success, 1 when diagnostics contained errors, 2 on usage
/// errors.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Generate object descriptors and run the serialization oracle"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "report written files on stderr");

  // gen
  std::vector<std::string> gen_inputs;
  std::vector<std::string> gen_actions;
  std::string gen_out_dir = ".";
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "emit descriptor files for one or more headers");
  gen_cmd->add_option("headers", gen_inputs, "header files to process")
      ->required()
      ->expected(-1);
  gen_cmd
      ->add_option("--action", gen_actions,
                   "descriptor action name (repeatable; default pack, unpack)")
      ->check([](const std::string& s) {
        return detail::valid_action_name(s)
                   ? std::string()
                   : "not a valid action name: '" + s + "'";
      });
  gen_cmd->add_option("-o,--output-dir", gen_out_dir, "output directory");

  // insert-friend
  std::string if_input;
  std::string if_output;
  CLI::App* if_cmd = app.add_subcommand(
      "insert-friend", "insert access macros into class bodies (in place)");
  if_cmd->add_option("file", if_input, "source file to patch")->required();
  if_cmd->add_option("-o,--output", if_output,
                     "write the patched source here instead of in place");

  // fix-includes
  std::string fi_corpus;
  std::string fi_out;
  CLI::App* fi_cmd = app.add_subcommand(
      "fix-includes", "patch every header under a directory tree");
  fi_cmd->add_option("corpus", fi_corpus, "directory to scan")->required();
  fi_cmd->add_option("-o,--output-dir", fi_out, "where patched copies go")
      ->required();

  // inspect
  std::vector<std::string> in_inputs;
  CLI::App* in_cmd =
      app.add_subcommand("inspect", "print the parsed registry as JSON");
  in_cmd->add_option("headers", in_inputs, "header files to process")
      ->required()
      ->expected(-1);

  // pack / unpack
  std::string pk_header, pk_class, pk_values, pk_blob;
  std::string pk_mode = "native";
  std::vector<std::string> pk_single;
  CLI::App* pk_cmd =
      app.add_subcommand("pack", "encode a values file through the oracle");
  pk_cmd->add_option("header", pk_header, "header declaring the class")
      ->required();
  pk_cmd->add_option("class", pk_class, "class to encode")->required();
  pk_cmd->add_option("values", pk_values, "values file (path = literal lines)")
      ->required();
  pk_cmd->add_option("-o,--output", pk_blob, "output blob path")->required();
  pk_cmd->add_option("--mode", pk_mode, "encoding: native or xdr")
      ->check(CLI::IsMember({"native", "xdr"}));
  pk_cmd->add_option("--single-obj", pk_single,
                     "treat pointers to this type as single-object");

  std::string up_header, up_class, up_blob, up_out;
  std::string up_mode = "native";
  std::vector<std::string> up_single;
  CLI::App* up_cmd =
      app.add_subcommand("unpack", "decode a blob back into a values file");
  up_cmd->add_option("header", up_header, "header declaring the class")
      ->required();
  up_cmd->add_option("class", up_class, "class to decode")->required();
  up_cmd->add_option("blob", up_blob, "blob produced by pack")->required();
  up_cmd->add_option("-o,--output", up_out,
                     "write the values file here instead of standard output");
  up_cmd->add_option("--mode", up_mode, "encoding: native or xdr")
      ->check(CLI::IsMember({"native", "xdr"}));
  up_cmd->add_option("--single-obj", up_single,
                     "treat pointers to this type as single-object");

  try {
    // CLI11's vector overload wants the arguments reversed.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      if (gen_actions.empty()) gen_actions = {"pack", "unpack"};
      return detail::run_gen(gen_inputs, gen_actions, gen_out_dir, verbosity,
                             out, err);
    }
    if (if_cmd->parsed())
      return detail::run_insert_friend(if_input, if_output, verbosity, err);
    if (fi_cmd->parsed()) return detail::run_fix_includes(fi_corpus, fi_out, out, err);
    if (in_cmd->parsed()) return detail::run_inspect(in_inputs, out, err);
    if (pk_cmd->parsed())
      return detail::run_pack(pk_header, pk_class, pk_values, pk_blob,
                              pk_mode == "xdr" ? Mode::Xdr : Mode::Native,
                              pk_single, err);
    if (up_cmd->parsed())
      return detail::run_unpack(up_header, up_class, up_blob, up_out,
                                up_mode == "xdr" ? Mode::Xdr : Mode::Native,
                                up_single, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}

}  // namespace cli
}  // namespace classdesc

#endif  // CLASSDESC_CLI_HPP
