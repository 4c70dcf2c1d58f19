#ifndef ISPKIT_UTIL_JSON_MAT_HPP
#define ISPKIT_UTIL_JSON_MAT_HPP

#include <Eigen/Dense>
#include <json.hpp>

namespace isp {

inline nlohmann::ordered_json mat_to_json(const Eigen::MatrixXd& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (long r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd mat_from_json(const nlohmann::json& j) {
    long rows = static_cast<long>(j.size());
    long cols = rows > 0 ? static_cast<long>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c)
            m(r, c) = j[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>();
    return m;
}

} // namespace isp

#endif
