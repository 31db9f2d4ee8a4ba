#include "locorth/scenario.hpp"

#include "locorth/errors.hpp"

#include <limits>

namespace locorth {

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exponent) {
    std::uint64_t result = 1;
    for (int i = 0; i < exponent; ++i) {
        if (result > std::numeric_limits<std::uint64_t>::max() / base) {
            throw InputError("scenario too large: index overflows 64 bits");
        }
        result *= base;
    }
    return result;
}

} // namespace

Scenario::Scenario(int parties, int settings, int outcomes)
    : parties_(parties), settings_(settings), outcomes_(outcomes) {
    if (parties < 1) throw InputError("scenario needs at least one party");
    if (settings < 1) throw InputError("scenario needs at least one setting per party");
    if (outcomes < 2) throw InputError("scenario needs at least two outcomes per setting");
}

std::uint64_t Scenario::event_count() const { return checked_pow(local_size(), parties_); }
std::uint64_t Scenario::context_count() const { return checked_pow(static_cast<std::uint64_t>(settings_), parties_); }
std::uint64_t Scenario::outcome_tuple_count() const {
    return checked_pow(static_cast<std::uint64_t>(outcomes_), parties_);
}

std::string Scenario::to_string() const {
    return "(" + std::to_string(parties_) + "," + std::to_string(settings_) + "," + std::to_string(outcomes_) + ")";
}

void check_event(const Scenario& s, const Event& e) {
    auto n = static_cast<std::size_t>(s.parties());
    if (e.outcomes.size() != n || e.settings.size() != n) {
        throw InputError("event has " + std::to_string(e.outcomes.size()) + " parties, scenario " + s.to_string() +
                         " expects " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (e.outcomes[i] < 0 || e.outcomes[i] >= s.outcomes()) throw InputError("event outcome out of range");
        if (e.settings[i] < 0 || e.settings[i] >= s.settings()) throw InputError("event setting out of range");
    }
}

std::uint64_t encode(const Scenario& s, const Event& e) {
    check_event(s, e);
    std::uint64_t index = 0;
    for (int i = 0; i < s.parties(); ++i) {
        index = index * s.local_size() + static_cast<std::uint64_t>(e.settings[i]) * s.outcomes() + e.outcomes[i];
    }
    return index;
}

Event decode(const Scenario& s, std::uint64_t index) {
    auto n = static_cast<std::size_t>(s.parties());
    Event e{std::vector<int>(n), std::vector<int>(n)};
    for (std::size_t i = n; i-- > 0;) {
        auto label = index % s.local_size();
        index /= s.local_size();
        e.settings[i] = static_cast<int>(label / s.outcomes());
        e.outcomes[i] = static_cast<int>(label % s.outcomes());
    }
    if (index != 0) throw InputError("event index out of range for scenario " + s.to_string());
    return e;
}

std::uint64_t local_label(const Scenario& s, std::uint64_t index, int party) {
    for (int i = s.parties() - 1; i > party; --i) index /= s.local_size();
    return index % s.local_size();
}

std::uint64_t context_index(const Scenario& s, const std::vector<int>& settings) {
    std::uint64_t index = 0;
    for (int x : settings) index = index * s.settings() + x;
    return index;
}

std::vector<int> context_from_index(const Scenario& s, std::uint64_t index) {
    std::vector<int> x(s.parties());
    for (std::size_t i = x.size(); i-- > 0;) {
        x[i] = static_cast<int>(index % s.settings());
        index /= s.settings();
    }
    return x;
}

std::string format_event(const Event& e) {
    std::string out;
    out.reserve(e.outcomes.size() * 2 + 1);
    for (int a : e.outcomes) {
        if (a < 0 || a > 9) throw InputError("outcome not representable as a single digit");
        out.push_back(static_cast<char>('0' + a));
    }
    out.push_back('|');
    for (int x : e.settings) {
        if (x < 0 || x > 9) throw InputError("setting not representable as a single digit");
        out.push_back(static_cast<char>('0' + x));
    }
    return out;
}

Event parse_event(std::string_view text) {
    auto bar = text.find('|');
    if (bar == std::string_view::npos) throw InputError("event '" + std::string(text) + "' lacks '|'");
    auto outs = text.substr(0, bar);
    auto sets = text.substr(bar + 1);
    if (outs.empty() || outs.size() != sets.size()) {
        throw InputError("event '" + std::string(text) + "' has mismatched outcome/setting lengths");
    }
    Event e;
    for (char c : outs) {
        if (c < '0' || c > '9') throw InputError("non-digit outcome in '" + std::string(text) + "'");
        e.outcomes.push_back(c - '0');
    }
    for (char c : sets) {
        if (c < '0' || c > '9') throw InputError("non-digit setting in '" + std::string(text) + "'");
        e.settings.push_back(c - '0');
    }
    return e;
}

bool are_orthogonal(const Scenario& s, const Event& e, const Event& f) {
    check_event(s, e);
    check_event(s, f);
    for (std::size_t i = 0; i < e.outcomes.size(); ++i) {
        if (e.settings[i] == f.settings[i] && e.outcomes[i] != f.outcomes[i]) return true;
    }
    return false;
}

bool are_orthogonal(const Scenario& s, std::uint64_t e, std::uint64_t f) {
    const auto base = s.local_size();
    const auto d = static_cast<std::uint64_t>(s.outcomes());
    for (int i = 0; i < s.parties(); ++i) {
        auto le = e % base;
        auto lf = f % base;
        if (le / d == lf / d && le != lf) return true;
        e /= base;
        f /= base;
    }
    return false;
}

} // namespace locorth
