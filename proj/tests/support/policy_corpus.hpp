#pragma once

#include <array>
#include <string_view>
#include <utility>

// Policies over at most four leaves, shared by the structural tests and the
// acceptance gate. Labels draw from four authorities with one attribute
// each.

namespace corpus {

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 4>
    kLabels = {{{"hospital", "employee-id"},
                {"dmv", "drivers-license"},
                {"insurer", "policy-number"},
                {"board", "medical-license"}}};

inline constexpr std::array<std::string_view, 15> kPolicies = {
    "employee-id@hospital",
    "employee-id@hospital AND drivers-license@dmv",
    "employee-id@hospital OR drivers-license@dmv",
    "(employee-id@hospital AND drivers-license@dmv) OR policy-number@insurer",
    "employee-id@hospital AND (drivers-license@dmv OR policy-number@insurer)",
    "2 of (employee-id@hospital, drivers-license@dmv, policy-number@insurer)",
    "employee-id@hospital AND drivers-license@dmv AND policy-number@insurer",
    "employee-id@hospital OR drivers-license@dmv OR policy-number@insurer",
    "2 of (employee-id@hospital, drivers-license@dmv, policy-number@insurer, "
    "medical-license@board)",
    "3 of (employee-id@hospital, drivers-license@dmv, policy-number@insurer, "
    "medical-license@board)",
    "(employee-id@hospital OR drivers-license@dmv) AND "
    "(policy-number@insurer OR medical-license@board)",
    "(employee-id@hospital AND drivers-license@dmv) OR "
    "(policy-number@insurer AND medical-license@board)",
    "employee-id@hospital AND 2 of (drivers-license@dmv, "
    "policy-number@insurer, medical-license@board)",
    "2 of (employee-id@hospital AND drivers-license@dmv, "
    "policy-number@insurer, medical-license@board)",
    "employee-id@hospital AND (employee-id@hospital OR drivers-license@dmv)",
};

}  // namespace corpus
