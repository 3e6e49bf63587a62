#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace logjet {

// One machine-readable record per check. Serialized with a fixed key order
// so identical argv+seed produce byte-identical output; wall time goes to
// stderr, never into the payload.
struct CheckReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    long trials = 0;
    long failures = 0;
    std::string max_residual = "0";
    std::uint64_t seed = 0;
    std::string witness;

    bool passed() const { return failures == 0; }

    std::string to_json_line() const
    {
        nlohmann::ordered_json j;
        j["check"] = name;
        nlohmann::ordered_json p = nlohmann::ordered_json::object();
        for (const auto& [k, v] : params)
            p[k] = v;
        j["params"] = p;
        j["trials"] = trials;
        j["failures"] = failures;
        j["max_residual"] = max_residual;
        j["seed"] = seed;
        if (!witness.empty())
            j["witness"] = witness;
        return j.dump();
    }
};

inline std::string format_residual(double r)
{
    if (r == 0.0)
        return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", r);
    return buf;
}

} // namespace logjet
