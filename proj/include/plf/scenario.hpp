#ifndef PLF_SCENARIO_HPP
#define PLF_SCENARIO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "plf/depth1.hpp"

namespace plf {

class InvalidBehavior : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two superobservers, Alice (setting X, outcome A) and Bob (Y, B), each with an optional
/// friend (Charlie's outcome C, Debbie's outcome D). At X = read_x Alice copies C into A;
/// likewise Bob copies D into B at Y = read_y.
struct ScenarioConfig {
    std::vector<int> x_values{1, 2};
    std::vector<int> y_values{1, 2};
    std::vector<int> a_values{0, 1};
    std::vector<int> b_values{0, 1};
    bool friend_a = true;
    bool friend_b = true;
    std::optional<int> read_x = 1;
    std::optional<int> read_y = 1;

    /// Throws InvalidBehavior on empty or duplicate domains, negative values,
    /// or a friend whose reading setting is missing from the setting domain.
    void validate() const;

    std::size_t num_a() const { return a_values.size(); }
    std::size_t num_b() const { return b_values.size(); }
    std::size_t num_x() const { return x_values.size(); }
    std::size_t num_y() const { return y_values.size(); }
    /// Number of friend-outcome values in the extended table (1 when the friend is absent).
    std::size_t num_c() const { return friend_a ? a_values.size() : 1; }
    std::size_t num_d() const { return friend_b ? b_values.size() : 1; }
    std::size_t num_cells() const { return num_a() * num_b() * num_x() * num_y(); }

    std::size_t a_index(int v) const;
    std::size_t b_index(int v) const;
    std::size_t x_index(int v) const;
    std::size_t y_index(int v) const;
    /// Index of the reading setting; only meaningful with the corresponding friend.
    std::size_t read_x_index() const { return x_index(*read_x); }
    std::size_t read_y_index() const { return y_index(*read_y); }

    /// No friends: an ordinary bipartite Bell scenario.
    static ScenarioConfig bell();

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Outcome/setting values, e.g. {1,1,2,2} is A=1, B=1, X=2, Y=2.
struct Cell {
    int a, b, x, y;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string to_string(const Cell& c);

/// Which (a,b,x,y) the superobservers may observe. Stored densely in (a,b,x,y) index order.
class Behavior {
public:
    /// `possible` has config.num_cells() entries in index order. Every (x,y) context must
    /// allow at least one (a,b).
    Behavior(ScenarioConfig config, std::vector<bool> possible);

    static Behavior from_cells(ScenarioConfig config, const std::vector<Cell>& possible_cells);
    /// Every cell possible.
    static Behavior all_possible(ScenarioConfig config);

    const ScenarioConfig& config() const { return config_; }

    std::size_t index(std::size_t ia, std::size_t ib, std::size_t ix, std::size_t iy) const {
        return ((ia * config_.num_b() + ib) * config_.num_x() + ix) * config_.num_y() + iy;
    }
    bool possible(std::size_t ia, std::size_t ib, std::size_t ix, std::size_t iy) const {
        return possible_[index(ia, ib, ix, iy)];
    }
    bool possible(const Cell& c) const;
    const std::vector<bool>& table() const { return possible_; }

    Cell cell_at(std::size_t ia, std::size_t ib, std::size_t ix, std::size_t iy) const;
    std::vector<Cell> possible_cells() const;
    std::vector<Cell> impossible_cells() const;

    friend bool operator==(const Behavior&, const Behavior&) = default;

private:
    ScenarioConfig config_;
    std::vector<bool> possible_;
};

struct PnsViolation {
    char party;                 // 'A' or 'B'
    int value;                  // outcome whose marginal possibility changes
    std::pair<int, int> first;  // (x, y)
    std::pair<int, int> second;
};

struct PnsReport {
    bool holds = true;
    std::vector<PnsViolation> violations;
};

/// Possibilistic no-signalling: each party's marginal possibilities do not depend on
/// the other party's setting.
PnsReport check_pns(const Behavior& beh);

/// Variable names used by the encoder.
inline constexpr const char* kVarA = "A";
inline constexpr const char* kVarB = "B";
inline constexpr const char* kVarC = "C";
inline constexpr const char* kVarD = "D";
inline constexpr const char* kVarX = "X";
inline constexpr const char* kVarY = "Y";

/// `A=a & B=b & X=x & Y=y`
Formula cell_event(const Cell& c);
/// Label carried by the Required/Forbidden clause of a cell, e.g. `cell(1,1,1,1)`.
std::string cell_label(const Cell& c);

/// Translates a behavior into the depth-1 modal constraints asserted at w0:
/// Required/Forbidden per cell, reading rules as MustAll, and the possibilistic
/// local-agency family as Conditionals. Clause order is deterministic.
Depth1Problem encode(const Behavior& beh);

ScenarioConfig config_from_json(const nlohmann::json& j);
Behavior behavior_from_json(const nlohmann::json& j);
nlohmann::json behavior_to_json(const Behavior& beh);
nlohmann::json config_to_json(const ScenarioConfig& c);
nlohmann::json pns_report_to_json(const PnsReport& r);
Behavior load_behavior(const std::string& path);

}  // namespace plf

#endif
