// Golden tests for the command-line surface: runs the built binary with
// real argument vectors, parses the JSON, and checks values, exit codes,
// determinism and the published output schema.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

using nlohmann::json;

namespace {

int g_failures = 0;

#define CHECK(cond)                                                                   \
    do {                                                                              \
        if (!(cond)) {                                                                \
            ++g_failures;                                                             \
            std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << "  " #cond "\n";   \
        }                                                                             \
    } while (0)

struct RunResult {
    int exit_code;
    std::string output;
};

std::string g_binary;

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + g_binary + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        ++g_failures;
        return {-1, ""};
    }
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        ++g_failures;
        std::cerr << "FAIL json parse: " << e.what() << "\n";
        return json::object();
    }
}

std::string strip_timing(std::string s) {
    static const std::regex timing("\"timing_ms\"\\s*:\\s*[0-9]+");
    return std::regex_replace(s, timing, "\"timing_ms\":0");
}

// minimal structural validator for the subset of JSON Schema the published
// schema uses: $ref, oneOf, type, required, properties, items, pattern,
// enum, minItems
struct Validator {
    json schema;

    const json& resolve(const json& node) const {
        if (node.is_object() && node.contains("$ref")) {
            std::string ref = node["$ref"].get<std::string>();
            const std::string prefix = "#/definitions/";
            return schema["definitions"][ref.substr(prefix.size())];
        }
        return node;
    }

    bool validate(const json& inst, const json& raw_node) const {
        const json& node = resolve(raw_node);
        if (node.contains("oneOf")) {
            for (const auto& alt : node["oneOf"])
                if (validate(inst, alt)) return true;
            return false;
        }
        if (node.contains("type")) {
            const std::string t = node["type"].get<std::string>();
            if (t == "object" && !inst.is_object()) return false;
            if (t == "array" && !inst.is_array()) return false;
            if (t == "string" && !inst.is_string()) return false;
            if (t == "integer" && !inst.is_number_integer()) return false;
            if (t == "number" && !inst.is_number()) return false;
            if (t == "boolean" && !inst.is_boolean()) return false;
        }
        if (node.contains("enum")) {
            bool hit = false;
            for (const auto& v : node["enum"]) hit = hit || v == inst;
            if (!hit) return false;
        }
        if (node.contains("pattern") && inst.is_string()) {
            std::regex re(node["pattern"].get<std::string>());
            if (!std::regex_match(inst.get<std::string>(), re)) return false;
        }
        if (node.contains("required"))
            for (const auto& key : node["required"])
                if (!inst.contains(key.get<std::string>())) return false;
        if (node.contains("properties") && inst.is_object())
            for (auto it = node["properties"].begin(); it != node["properties"].end(); ++it)
                if (inst.contains(it.key()) && !validate(inst[it.key()], it.value())) return false;
        if (node.contains("minItems") && inst.is_array() &&
            inst.size() < node["minItems"].get<std::size_t>())
            return false;
        if (node.contains("items") && inst.is_array())
            for (const auto& item : inst)
                if (!validate(item, node["items"])) return false;
        return true;
    }
};

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_tests <frobshot-binary> <schema.json>\n";
        return 2;
    }
    g_binary = argv[1];
    Validator validator;
    {
        std::ifstream in(argv[2]);
        std::stringstream ss;
        ss << in.rdbuf();
        validator.schema = json::parse(ss.str());
    }

    // exact
    {
        auto r = run("exact 3 5");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(j["results"]["frobenius"] == "7");
        CHECK(validator.validate(j, validator.schema));
    }
    {
        auto r = run("exact 4 6");
        CHECK(r.exit_code == 2);
        json j = parse(r.output);
        CHECK(j["error"]["code"] == "NotCoprime");
        CHECK(validator.validate(j, validator.schema));
    }
    {
        auto r = run("exact 3 5 8");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(j["results"]["frobenius"] == "7");
        CHECK(j["results"]["reduced"] == json::array({"3", "5"}));
    }
    {
        auto r = run("exact 10000019 10000079 --modulus-guard 1000");
        CHECK(r.exit_code == 3);
        json j = parse(r.output);
        CHECK(j["error"]["code"] == "ModulusTooLarge");
    }

    // bounds
    {
        auto r = run("bounds 9337 9961 11593 67367");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(j["results"]["bounds"]["esm"]["value"] == "10995433");
        CHECK(j["results"]["bounds"]["bdr"]["value"] == "91235853");
        CHECK(j["results"]["esm"] == true);
        CHECK(validator.validate(j, validator.schema));
    }
    {
        auto r = run("bounds 3 5 --exact");
        json j = parse(r.output);
        CHECK(j["results"]["bounds"]["sylvester"]["kind"] == "exact");
        CHECK(j["results"]["bounds"]["sylvester"]["value"] == "7");
        CHECK(j["results"]["exact"]["frobenius"] == "7");
    }
    {
        // coarser precision can only loosen the reported bounds
        json fine = parse(run("bounds 9337 9961 11593 67367").output);
        json coarse = parse(run("bounds 9337 9961 11593 67367 --precision 32").output);
        auto value = [](const json& j, const char* name) {
            return std::stoll(j["results"]["bounds"][name]["value"].get<std::string>());
        };
        for (const char* name : {"esm", "bdr", "main_jarnik", "general"})
            CHECK(value(coarse, name) >= value(fine, name));
        // env variable is an alternative spelling of --precision
        json via_env = parse(run("bounds 9337 9961 11593 67367", "FROBSHOT_PRECISION=32 ").output);
        for (const char* name : {"esm", "bdr", "main_jarnik", "general"})
            CHECK(value(via_env, name) == value(coarse, name));
    }

    // lattice
    {
        auto r = run("lattice 3 5 7");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(j["results"]["determinant_sq"] == "83");
        CHECK(j["results"]["covering"].contains("exact_sq"));
        CHECK(validator.validate(j, validator.schema));
    }
    {
        // rank 5: enclosure only, no exact covering radius
        auto r = run("lattice 7 11 13 17 19 23");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(!j["results"]["covering"].contains("exact_sq"));
        CHECK(j["results"]["covering"].contains("upper_sq"));
    }

    // tables
    for (const char* which : {"n4", "n5", "n6"}) {
        auto r = run(std::string("table ") + which);
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(j["results"]["all_match"] == true);
        CHECK(validator.validate(j, validator.schema));
    }

    // esm-family
    {
        auto r = run("esm-family --s 3");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        const json& inst = j["results"]["instances"][0];
        CHECK(inst["fully_certified"] == true);
        CHECK(inst["tuple"] == json::array({"9337", "9961", "11593", "67367"}));
        CHECK(inst["sq_minima"][0] == "1802");
    }
    {
        auto r = run("esm-family --t 9");
        CHECK(r.exit_code == 2);
        json j = parse(r.output);
        CHECK(j["error"]["code"] == "OrderViolation");
    }
    {
        auto r = run("esm-family --t 41");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(j["results"]["instances"][0]["fully_certified"] == true);
    }
    {
        auto r = run("--help");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("exact") != std::string::npos);
    }
    {
        auto r = run("esm-family --s 2..4 --asymptotics");
        CHECK(r.exit_code == 0);
        json j = parse(r.output);
        CHECK(j["results"]["instances"].size() == 3);
        CHECK(j["results"]["asymptotics"]["ratio_strictly_increasing"] == true);
    }

    // sweep: determinism and zero violations
    {
        auto first = run("sweep --count 5 --seed 9");
        auto second = run("sweep --count 5 --seed 9");
        CHECK(first.exit_code == 0);
        CHECK(strip_timing(first.output) == strip_timing(second.output));
        auto different = run("sweep --count 5 --seed 10");
        CHECK(strip_timing(first.output) != strip_timing(different.output));

        std::istringstream lines(first.output);
        std::string line;
        std::size_t records = 0;
        while (std::getline(lines, line)) {
            json j = parse(line);
            CHECK(validator.validate(j, validator.schema));
            if (j["results"].contains("summary"))
                CHECK(j["results"]["summary"]["violations"] == 0);
            ++records;
        }
        CHECK(records == 6);  // 5 tuples + summary
    }
    {
        auto r = run("sweep --count 0 --seed 1");
        CHECK(r.exit_code == 0);
        // only the summary line
        CHECK(parse(r.output)["results"]["summary"]["count"] == 0);
    }

    // serialization round-trips losslessly
    {
        auto r = run("lattice 1867558 2348176 2918749 5249843 26695349");
        json once = parse(r.output);
        json twice = parse(once.dump());
        CHECK(once == twice);
        // big integers survive as exact decimal strings
        CHECK(once["results"]["norm_sq"].get<std::string>() ==
              json::parse(once.dump())["results"]["norm_sq"].get<std::string>());
    }

    // unknown table name is an input error
    {
        auto r = run("table n7");
        CHECK(r.exit_code == 2);
        json j = parse(r.output);
        CHECK(j.contains("error"));
    }

    // alternate renderings carry the same numbers
    {
        auto as_json = run("bounds 9337 9961 11593 67367");
        auto as_csv = run("bounds 9337 9961 11593 67367 --format csv");
        auto as_md = run("bounds 9337 9961 11593 67367 --format md");
        CHECK(as_csv.output.find("10995433") != std::string::npos);
        CHECK(as_md.output.find("10995433") != std::string::npos);
        CHECK(as_csv.output.find("91235853") != std::string::npos);
        CHECK(as_md.output.find("91235853") != std::string::npos);
        json j = parse(as_json.output);
        // every scalar leaf of the JSON rendering appears in the CSV one
        CHECK(as_csv.output.find(j["results"]["covering"]["exact_sq"].get<std::string>()) !=
              std::string::npos);
    }

    if (g_failures == 0) {
        std::cout << "cli_tests: all checks passed\n";
        return 0;
    }
    std::cerr << "cli_tests: " << g_failures << " failures\n";
    return 1;
}
