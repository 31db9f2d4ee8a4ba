#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace locorth {

/// A Bell scenario (n, m, d): n parties, m settings per party, d outcomes per setting.
class Scenario {
public:
    Scenario(int parties, int settings, int outcomes);

    int parties() const { return parties_; }
    int settings() const { return settings_; }
    int outcomes() const { return outcomes_; }

    /// Number of (setting, outcome) pairs seen by one party, m*d.
    std::uint64_t local_size() const { return static_cast<std::uint64_t>(settings_) * outcomes_; }
    /// (m*d)^n; throws InputError on 64-bit overflow.
    std::uint64_t event_count() const;
    /// m^n setting tuples.
    std::uint64_t context_count() const;
    /// d^n outcome tuples per context.
    std::uint64_t outcome_tuple_count() const;

    /// "(n,m,d)"
    std::string to_string() const;

    auto operator<=>(const Scenario&) const = default;

private:
    int parties_;
    int settings_;
    int outcomes_;
};

/// A joint outcome/setting assignment (a1...an | x1...xn).
struct Event {
    std::vector<int> outcomes;
    std::vector<int> settings;

    auto operator<=>(const Event&) const = default;
};

/// Throws InputError unless `e` has n entries with outcomes < d and settings < m.
void check_event(const Scenario& s, const Event& e);

/// Mixed-radix index: sum_i (a_i + d*x_i) * (m*d)^(n-1-i).
std::uint64_t encode(const Scenario& s, const Event& e);
Event decode(const Scenario& s, std::uint64_t index);

/// Local label of party i inside an event index: x_i*d + a_i.
std::uint64_t local_label(const Scenario& s, std::uint64_t index, int party);

/// Index of the setting tuple x (party-major, base m).
std::uint64_t context_index(const Scenario& s, const std::vector<int>& settings);
std::vector<int> context_from_index(const Scenario& s, std::uint64_t index);

/// "a1...an|x1...xn" with single digits; requires m, d <= 10.
std::string format_event(const Event& e);
Event parse_event(std::string_view text);

/// True iff some party uses the same setting with different outcomes.
bool are_orthogonal(const Scenario& s, const Event& e, const Event& f);
/// Same relation on mixed-radix indices.
bool are_orthogonal(const Scenario& s, std::uint64_t e, std::uint64_t f);

} // namespace locorth
