// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end of the rflx toolchain:
//
//   rflx check      parse, elaborate and validate specifications
//   rflx graph      dump a message graph as DOT
//   rflx generate   emit standalone parser modules
//   rflx validate   run the interpreter over a message file
//
// Exit codes: 0 success / message valid, 1 semantic failure / message
// invalid, 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"

#include "rflx/rflx.hpp"

namespace {

namespace fs = std::filesystem;

struct Diagnostic {
    std::string file;
    int line = 0;
    int column = 0;
    std::string message;
};

bool use_color() {
    const char* env = std::getenv("RFLX_COLOR");
    if (env != nullptr) {
        std::string v = rflx::ascii_lower(env);
        if (v == "always")
            return true;
        if (v == "never")
            return false;
    }
    return isatty(fileno(stderr)) != 0;
}

void print_diagnostics(std::vector<Diagnostic> diags) {
    std::sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.file, a.line, a.column, a.message) <
               std::tie(b.file, b.line, b.column, b.message);
    });
    bool color = use_color();
    for (const Diagnostic& d : diags) {
        std::cerr << d.file << ":" << d.line << ":" << d.column << ": ";
        if (color)
            std::cerr << "\033[31merror:\033[0m ";
        else
            std::cerr << "error: ";
        std::cerr << d.message << "\n";
    }
}

std::optional<std::string> read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadResult {
    std::vector<rflx::MessageGraph> messages;
    std::vector<rflx::Refinement> refinements;
    std::vector<Diagnostic> diagnostics;
    bool io_error = false;
};

/// Parses and elaborates a list of specification files. Files are processed
/// in order; refinements may reference messages from earlier files.
LoadResult load_specs(const std::vector<std::string>& paths) {
    LoadResult result;
    for (const std::string& path : paths) {
        auto text = read_text_file(path);
        if (!text) {
            std::cerr << "error: cannot read '" << path << "'\n";
            result.io_error = true;
            continue;
        }
        auto parsed = rflx::dsl::parse_spec(*text);
        if (const auto* errs = std::get_if<std::vector<rflx::dsl::SyntaxError>>(&parsed)) {
            for (const auto& e : *errs)
                result.diagnostics.push_back({path, e.loc.line, e.loc.column, e.message});
            continue;
        }
        auto elaborated =
            rflx::dsl::elaborate(std::get<rflx::dsl::SpecFile>(parsed), result.messages);
        if (const auto* errs =
                std::get_if<std::vector<rflx::dsl::ElaborationError>>(&elaborated)) {
            for (const auto& e : *errs)
                result.diagnostics.push_back({path, e.loc.line, e.loc.column, e.message});
            continue;
        }
        auto& pkg = std::get<rflx::dsl::ElaboratedPackage>(elaborated);
        for (auto& g : pkg.messages)
            result.messages.push_back(std::move(g));
        for (auto& r : pkg.refinements)
            result.refinements.push_back(std::move(r));
    }
    return result;
}

const rflx::MessageGraph* find_message(const LoadResult& loaded, const std::string& name) {
    std::string key = rflx::ascii_lower(name);
    for (const auto& g : loaded.messages) {
        std::string qualified = rflx::ascii_lower(g.name());
        if (qualified == key)
            return &g;
        auto dot = qualified.find('.');
        if (dot != std::string::npos && qualified.substr(dot + 1) == key)
            return &g;
    }
    return nullptr;
}

/// Message data is raw bytes (.bin and anything else) or hexadecimal text
/// (.hex: whitespace-separated hex digits, `--` comments to end of line).
std::optional<std::vector<std::uint8_t>> read_message_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    std::string raw = ss.str();
    if (fs::path(path).extension() != ".hex")
        return std::vector<std::uint8_t>(raw.begin(), raw.end());

    std::vector<std::uint8_t> bytes;
    int pending = -1;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == '-' && i + 1 < raw.size() && raw[i + 1] == '-') {
            while (i < raw.size() && raw[i] != '\n')
                ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
            continue;
        int digit;
        if (c >= '0' && c <= '9')
            digit = c - '0';
        else if (c >= 'a' && c <= 'f')
            digit = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            digit = c - 'A' + 10;
        else
            return std::nullopt;
        if (pending < 0) {
            pending = digit;
        } else {
            bytes.push_back(static_cast<std::uint8_t>(pending * 16 + digit));
            pending = -1;
        }
    }
    if (pending >= 0)
        return std::nullopt;  // odd number of digits
    return bytes;
}

int cmd_check(const std::vector<std::string>& paths) {
    LoadResult loaded = load_specs(paths);
    print_diagnostics(loaded.diagnostics);
    return (loaded.diagnostics.empty() && !loaded.io_error) ? 0 : 1;
}

int cmd_graph(const std::vector<std::string>& paths, const std::string& message,
              const std::string& dot_path) {
    LoadResult loaded = load_specs(paths);
    if (!loaded.diagnostics.empty() || loaded.io_error) {
        print_diagnostics(loaded.diagnostics);
        return 1;
    }
    const rflx::MessageGraph* g = find_message(loaded, message);
    if (g == nullptr) {
        std::cerr << "error: unknown message '" << message << "'\n";
        return 1;
    }
    std::string dot = rflx::to_dot(*g);
    if (dot_path.empty()) {
        std::cout << dot;
        return 0;
    }
    std::ofstream out(dot_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << dot_path << "'\n";
        return 1;
    }
    out << dot;
    return 0;
}

int cmd_generate(const std::vector<std::string>& paths, const std::string& out_dir) {
    LoadResult loaded = load_specs(paths);
    if (!loaded.diagnostics.empty() || loaded.io_error) {
        print_diagnostics(loaded.diagnostics);
        return 1;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create directory '" << out_dir << "'\n";
        return 1;
    }
    std::vector<std::string> written;
    for (const auto& g : loaded.messages) {
        rflx::DerivedParser parser = rflx::derive_parser(g);
        for (const auto& file : rflx::generate(parser, loaded.refinements)) {
            fs::path target = fs::path(out_dir) / file.path;
            std::ofstream out(target, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write '" << target.string() << "'\n";
                return 1;
            }
            out << file.text;
            if (std::find(written.begin(), written.end(), target.string()) == written.end())
                written.push_back(target.string());
        }
    }
    for (const std::string& path : written)
        std::cout << path << "\n";
    return 0;
}

int cmd_validate(const std::string& spec_path, const std::string& message,
                 const std::string& data_path, const std::vector<std::string>& fields) {
    LoadResult loaded = load_specs({spec_path});
    if (!loaded.diagnostics.empty() || loaded.io_error) {
        print_diagnostics(loaded.diagnostics);
        return 1;
    }
    const rflx::MessageGraph* g = find_message(loaded, message);
    if (g == nullptr) {
        std::cerr << "error: unknown message '" << message << "'\n";
        return 1;
    }
    auto bytes = read_message_file(data_path);
    if (!bytes) {
        std::cerr << "error: cannot read message data from '" << data_path << "'\n";
        return 1;
    }
    rflx::DerivedParser parser = rflx::derive_parser(*g);
    rflx::MessageBuffer buffer(std::move(*bytes), g->name());
    bool valid = rflx::is_valid(parser, buffer);
    std::cout << g->name() << ": " << (valid ? "valid" : "invalid") << " (" << buffer.size_bytes()
              << " bytes)\n";
    for (const std::string& name : fields) {
        rflx::FieldId field = rflx::FieldId::named(name);
        if (!parser.graph.has_field(field)) {
            std::cerr << "error: unknown field '" << name << "'\n";
            return 1;
        }
        if (!rflx::field_valid(parser, field, buffer)) {
            std::cout << "field " << name << ": invalid\n";
            continue;
        }
        rflx::FieldSlice slice = rflx::field_access(parser, field, buffer);
        std::cout << "field " << name << ": valid first=" << slice.first
                  << " length=" << slice.length;
        if (slice.value)
            std::cout << " value=" << *slice.value;
        std::cout << "\n";
    }
    return valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rflx: binary message format toolchain"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "Parse, elaborate and validate specifications");
    std::vector<std::string> check_paths;
    check->add_option("specs", check_paths, "Specification files (.rflx)")->required();

    auto* graph = app.add_subcommand("graph", "Dump a message graph in DOT format");
    std::string graph_path;
    std::string graph_message;
    std::string graph_dot;
    graph->add_option("spec", graph_path, "Specification file (.rflx)")->required();
    graph->add_option("message", graph_message, "Message name (Package.Message or Message)")
        ->required();
    graph->add_option("--dot", graph_dot, "Write DOT to this file instead of stdout");

    auto* generate = app.add_subcommand("generate", "Generate standalone parser modules");
    std::vector<std::string> generate_paths;
    std::string generate_out;
    generate->add_option("specs", generate_paths, "Specification files (.rflx)")->required();
    generate->add_option("--out", generate_out, "Output directory")->required();

    auto* validate = app.add_subcommand("validate", "Validate a message file against a spec");
    std::string validate_spec;
    std::string validate_message;
    std::string validate_data;
    std::vector<std::string> validate_fields;
    validate->add_option("spec", validate_spec, "Specification file (.rflx)")->required();
    validate->add_option("message", validate_message, "Message name")->required();
    validate->add_option("data", validate_data, "Message data (.bin raw, .hex hex text)")
        ->required();
    validate->add_option("--field", validate_fields, "Also report this field's validity/value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (check->parsed())
        return cmd_check(check_paths);
    if (graph->parsed())
        return cmd_graph({graph_path}, graph_message, graph_dot);
    if (generate->parsed())
        return cmd_generate(generate_paths, generate_out);
    if (validate->parsed())
        return cmd_validate(validate_spec, validate_message, validate_data, validate_fields);
    return 2;
}
