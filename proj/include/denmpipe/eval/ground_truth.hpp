#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "denmpipe/denm/types.hpp"
#include "denmpipe/errors.hpp"

namespace denmpipe {

/// One labeled frame. Field-level labels are present exactly when the
/// frame is positive; see docs/gt-format.md for the CSV schema.
struct GroundTruthRow {
    std::string image_id;
    bool situation_present = false;
    std::optional<std::int64_t> number_of_lanes;
    std::optional<std::string> driving_lane_status;
    std::optional<std::int64_t> cause_code;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline std::int64_t parse_int_cell(const std::string& cell,
                                   const std::string& image_id,
                                   const char* column) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(cell, &used);
        if (used == cell.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::row_invariant,
                image_id + ": column " + column + " is not an integer ('" +
                    cell + "')",
                image_id);
}

}  // namespace detail

inline constexpr const char* kGroundTruthHeader =
    "image_id,situation_present,number_of_lanes,driving_lane_status,cause_code";

inline std::vector<GroundTruthRow> load_ground_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read ground truth '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw Error(Errc::bad_header, "ground truth file is empty");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.pop_back();
    if (line != kGroundTruthHeader)
        throw Error(Errc::bad_header, "expected header '" +
                                          std::string(kGroundTruthHeader) +
                                          "', got '" + line + "'");

    std::vector<GroundTruthRow> rows;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 5)
            throw Error(Errc::row_invariant,
                        "expected 5 columns, got " + std::to_string(cells.size()) +
                            " in '" + line + "'");
        GroundTruthRow row;
        row.image_id = cells[0];
        if (row.image_id.empty())
            throw Error(Errc::row_invariant, "empty image_id in '" + line + "'");
        if (!seen.insert(row.image_id).second)
            throw Error(Errc::duplicate_image_id,
                        "image_id '" + row.image_id + "' appears twice",
                        row.image_id);

        if (cells[1] == "1" || cells[1] == "true")
            row.situation_present = true;
        else if (cells[1] == "0" || cells[1] == "false")
            row.situation_present = false;
        else
            throw Error(Errc::row_invariant,
                        row.image_id + ": situation_present must be 0/1/true/false",
                        row.image_id);

        if (row.situation_present) {
            if (cells[2].empty() || cells[3].empty() || cells[4].empty())
                throw Error(Errc::row_invariant,
                            row.image_id +
                                ": positive rows need lanes, lane status and "
                                "cause code",
                            row.image_id);
            row.number_of_lanes =
                detail::parse_int_cell(cells[2], row.image_id, "number_of_lanes");
            row.driving_lane_status = cells[3];
            row.cause_code =
                detail::parse_int_cell(cells[4], row.image_id, "cause_code");

            if (*row.number_of_lanes < limits::lanes_min ||
                *row.number_of_lanes > limits::lanes_max)
                throw Error(Errc::row_invariant,
                            row.image_id + ": number_of_lanes outside 1..13",
                            row.image_id);
            const std::string& status = *row.driving_lane_status;
            if (static_cast<std::int64_t>(status.size()) != *row.number_of_lanes)
                throw Error(Errc::row_invariant,
                            row.image_id +
                                ": lane status length does not match lane count",
                            row.image_id);
            for (char c : status)
                if (c != '0' && c != '1')
                    throw Error(Errc::row_invariant,
                                row.image_id + ": lane status must be binary",
                                row.image_id);
            if (*row.cause_code < 0 || *row.cause_code > limits::cause_code_max)
                throw Error(Errc::row_invariant,
                            row.image_id + ": cause_code outside 0..255",
                            row.image_id);
        } else {
            if (!cells[2].empty() || !cells[3].empty() || !cells[4].empty())
                throw Error(Errc::row_invariant,
                            row.image_id +
                                ": negative rows must leave field labels empty",
                            row.image_id);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace denmpipe
