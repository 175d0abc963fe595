// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "support/helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string temp_dir() {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / ("rflx_cli_test_" + std::to_string(::getpid()) +
                                                "_" + std::to_string(counter++));
    fs::create_directories(dir);
    return dir.string();
}

CliResult run_cli(const std::string& args, const std::string& env = "RFLX_COLOR=never") {
    std::string dir = temp_dir();
    std::string out_path = dir + "/out";
    std::string err_path = dir + "/err";
    std::string command = env + " " + std::string(RFLX_CLI_PATH) + " " + args + " > " +
                          out_path + " 2> " + err_path;
    int raw = std::system(command.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = testsupport::slurp(out_path);
    r.err = testsupport::slurp(err_path);
    return r;
}

std::string write_temp_spec(const std::string& text) {
    std::string path = temp_dir() + "/spec.rflx";
    std::ofstream out(path);
    out << text;
    return path;
}

std::size_t count_lines_containing(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (line.find(needle) != std::string::npos)
            ++count;
    return count;
}

}  // namespace

TEST_CASE("check accepts the bundled specifications") {
    CliResult r = run_cli("check " + testsupport::spec_path("ethernet.rflx") + " " +
                          testsupport::spec_path("ipv4.rflx") + " " +
                          testsupport::spec_path("tls_heartbeat.rflx") + " " +
                          testsupport::spec_path("ipv4_in_ethernet.rflx"));
    INFO(r.err);
    CHECK(r.exit_code == 0);
    CHECK(r.err.empty());
}

TEST_CASE("check reports forward references with file/line/column") {
    std::string path = write_temp_spec(
        "package P is\n"
        "   type Octet is mod 256;\n"
        "   type M is\n"
        "      message\n"
        "         A : Octet then B if C = 1;\n"
        "         B : Octet;\n"
        "         C : Octet;\n"
        "      end message;\n"
        "end P;\n");
    CliResult r = run_cli("check " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("forward reference") != std::string::npos);
    CHECK(r.err.find(path + ":") != std::string::npos);
    // file:line:col: error: message
    CHECK(r.err.find(":3:4: error:") != std::string::npos);
    CHECK(r.err.find("\033[") == std::string::npos);  // color disabled
}

TEST_CASE("check without arguments is a usage error") {
    CliResult r = run_cli("check");
    CHECK(r.exit_code == 2);
}

TEST_CASE("unknown subcommands are usage errors") {
    CliResult r = run_cli("frobnicate");
    CHECK(r.exit_code == 2);
}

TEST_CASE("check on an unreadable file fails with a message") {
    CliResult r = run_cli("check /nonexistent/nowhere.rflx");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("cannot read") != std::string::npos);
}

TEST_CASE("syntax diagnostics are sorted by position") {
    std::string path = write_temp_spec(
        "package P is\n"
        "   type A is mod ;\n"
        "   type B is mod ;\n"
        "end P;\n");
    CliResult r = run_cli("check " + path);
    CHECK(r.exit_code == 1);
    std::size_t first = r.err.find(":2:");
    std::size_t second = r.err.find(":3:");
    REQUIRE(first != std::string::npos);
    REQUIRE(second != std::string::npos);
    CHECK(first < second);
}

TEST_CASE("graph emits a stable DOT digraph") {
    CliResult r = run_cli("graph " + testsupport::spec_path("ethernet.rflx") + " Frame");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("digraph \"Ethernet.Frame\"") != std::string::npos);
    CHECK(count_lines_containing(r.out, "->") == 10);
    // 7 fields + Initial + Final
    CHECK(count_lines_containing(r.out, "\"Initial\"") == 2);  // node decl + edge
    CHECK(r.out.find("\"Final\"") != std::string::npos);
    CHECK(r.out.find("Type_Length_TPID'First") != std::string::npos);

    CliResult hb = run_cli("graph " + testsupport::spec_path("tls_heartbeat.rflx") +
                           " Heartbeat_Message");
    REQUIRE(hb.exit_code == 0);
    CHECK(count_lines_containing(hb.out, "->") == 5);

    CliResult again = run_cli("graph " + testsupport::spec_path("ethernet.rflx") + " Frame");
    CHECK(again.out == r.out);  // bit-stable

    std::string dot_file = temp_dir() + "/frame.dot";
    CliResult to_file = run_cli("graph " + testsupport::spec_path("ethernet.rflx") +
                                " Ethernet.Frame --dot " + dot_file);
    CHECK(to_file.exit_code == 0);
    CHECK(testsupport::slurp(dot_file) == r.out);
}

TEST_CASE("graph rejects unknown messages") {
    CliResult r = run_cli("graph " + testsupport::spec_path("ethernet.rflx") + " Nothing");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("unknown message") != std::string::npos);
}

TEST_CASE("generate writes a manifest and deterministic files") {
    std::string out1 = temp_dir();
    std::string out2 = temp_dir();
    std::string specs = testsupport::spec_path("ethernet.rflx") + " " +
                        testsupport::spec_path("ipv4.rflx") + " " +
                        testsupport::spec_path("tls_heartbeat.rflx") + " " +
                        testsupport::spec_path("ipv4_in_ethernet.rflx");
    CliResult r1 = run_cli("generate " + specs + " --out " + out1);
    REQUIRE(r1.exit_code == 0);
    CHECK(count_lines_containing(r1.out, ".hpp") == 4);  // 3 modules + support

    for (const char* name : {"ethernet-frame.hpp", "ipv4-packet.hpp",
                             "tls_heartbeat-heartbeat_message.hpp", "rflx_gen_support.hpp"})
        CHECK(fs::exists(fs::path(out1) / name));

    // The refinement's contains function lands in the outer message module.
    CHECK(testsupport::slurp(out1 + "/ethernet-frame.hpp").find("contains_ipv4_in_ethernet") !=
          std::string::npos);

    CliResult r2 = run_cli("generate " + specs + " --out " + out2);
    REQUIRE(r2.exit_code == 0);
    for (const char* name : {"ethernet-frame.hpp", "ipv4-packet.hpp",
                             "tls_heartbeat-heartbeat_message.hpp", "rflx_gen_support.hpp"})
        CHECK(testsupport::slurp(out1 + "/" + name) == testsupport::slurp(out2 + "/" + name));
}

TEST_CASE("generate keeps independent packages independent") {
    std::string alone = temp_dir();
    CliResult r = run_cli("generate " + testsupport::spec_path("tls_heartbeat.rflx") +
                          " --out " + alone);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(fs::path(alone) / "tls_heartbeat-heartbeat_message.hpp"));
    CHECK_FALSE(fs::exists(fs::path(alone) / "ethernet-frame.hpp"));

    // Generating alongside unrelated packages does not change the output.
    std::string together = temp_dir();
    CliResult r2 = run_cli("generate " + testsupport::spec_path("ethernet.rflx") + " " +
                           testsupport::spec_path("tls_heartbeat.rflx") + " --out " + together);
    REQUIRE(r2.exit_code == 0);
    CHECK(testsupport::slurp(alone + "/tls_heartbeat-heartbeat_message.hpp") ==
          testsupport::slurp(together + "/tls_heartbeat-heartbeat_message.hpp"));
}

TEST_CASE("validate reports whole-message validity via the exit code") {
    CliResult valid = run_cli("validate " + testsupport::spec_path("ethernet.rflx") + " Frame " +
                              testsupport::vector_dir("ethernet") + "/ethernet_ii_ipv4.bin");
    CHECK(valid.exit_code == 0);
    CHECK(valid.out.find("valid") != std::string::npos);

    CliResult invalid =
        run_cli("validate " + testsupport::spec_path("tls_heartbeat.rflx") +
                " Heartbeat_Message " + testsupport::vector_dir("tls_heartbeat") +
                "/heartbleed_length_lie.bin");
    CHECK(invalid.exit_code == 1);
    CHECK(invalid.out.find("invalid") != std::string::npos);
}

TEST_CASE("validate reports field values on request") {
    CliResult r = run_cli("validate " + testsupport::spec_path("tls_heartbeat.rflx") +
                          " Heartbeat_Message " + testsupport::vector_dir("tls_heartbeat") +
                          "/request_padded.bin --field Message_Type --field Payload");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("field Message_Type: valid") != std::string::npos);
    CHECK(r.out.find("value=1") != std::string::npos);
    // Opaque fields report offsets only.
    CHECK(r.out.find("field Payload: valid first=24 length=32") != std::string::npos);

    CliResult unknown = run_cli("validate " + testsupport::spec_path("tls_heartbeat.rflx") +
                                " Heartbeat_Message " + testsupport::vector_dir("tls_heartbeat") +
                                "/request_padded.bin --field Bogus");
    CHECK(unknown.exit_code == 1);
}

TEST_CASE("validate accepts hex text input") {
    std::string hex_path = temp_dir() + "/request.hex";
    {
        std::ofstream out(hex_path);
        out << "-- heartbeat request, 4-byte payload, 16-byte padding\n";
        out << "01 00 04 70 69 6e 67\n";
        for (int i = 0; i < 16; ++i)
            out << "00 ";
        out << "\n";
    }
    CliResult r = run_cli("validate " + testsupport::spec_path("tls_heartbeat.rflx") +
                          " Heartbeat_Message " + hex_path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("valid") != std::string::npos);
}
