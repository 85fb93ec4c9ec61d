#include "slotfill/atis.hpp"

#include <iterator>
#include <string>
#include <vector>

namespace slotfill {

namespace {

constexpr std::string_view kLabels[] = {
    "B-airline_code",
    "B-airline_name",
    "B-airport_code",
    "B-airport_name",
    "B-arrive_date.date_relative",
    "B-arrive_date.day_name",
    "B-arrive_date.day_number",
    "B-arrive_date.month_name",
    "B-arrive_date.today_relative",
    "B-arrive_time.end_time",
    "B-arrive_time.period_mod",
    "B-arrive_time.period_of_day",
    "B-arrive_time.start_time",
    "B-arrive_time.time",
    "B-arrive_time.time_relative",
    "B-booking_class",
    "B-city_name",
    "B-class_type",
    "B-compartment",
    "B-connect",
    "B-cost_relative",
    "B-day_name",
    "B-day_number",
    "B-days_code",
    "B-depart_date.date_relative",
    "B-depart_date.day_name",
    "B-depart_date.day_number",
    "B-depart_date.month_name",
    "B-depart_date.today_relative",
    "B-depart_date.year",
    "B-depart_time.end_time",
    "B-depart_time.period_mod",
    "B-depart_time.period_of_day",
    "B-depart_time.start_time",
    "B-depart_time.time",
    "B-depart_time.time_relative",
    "B-economy",
    "B-fare_amount",
    "B-fare_basis_code",
    "B-flight",
    "B-flight_days",
    "B-flight_mod",
    "B-flight_number",
    "B-flight_stop",
    "B-flight_time",
    "B-fromloc.airport_code",
    "B-fromloc.airport_name",
    "B-fromloc.city_name",
    "B-fromloc.state_code",
    "B-fromloc.state_name",
    "B-meal",
    "B-meal_code",
    "B-meal_description",
    "B-mod",
    "B-month_name",
    "B-or",
    "B-period_of_day",
    "B-restriction_code",
    "B-return_date.date_relative",
    "B-return_date.day_name",
    "B-return_date.day_number",
    "B-return_date.month_name",
    "B-return_date.today_relative",
    "B-return_time.period_mod",
    "B-return_time.period_of_day",
    "B-round_trip",
    "B-state_code",
    "B-state_name",
    "B-stoploc.airport_code",
    "B-stoploc.airport_name",
    "B-stoploc.city_name",
    "B-stoploc.state_code",
    "B-time",
    "B-time_relative",
    "B-today_relative",
    "B-toloc.airport_code",
    "B-toloc.airport_name",
    "B-toloc.city_name",
    "B-toloc.country_name",
    "B-toloc.state_code",
    "B-toloc.state_name",
    "B-transport_type",
    "I-airline_name",
    "I-airport_name",
    "I-arrive_date.day_number",
    "I-arrive_time.end_time",
    "I-arrive_time.period_of_day",
    "I-arrive_time.start_time",
    "I-arrive_time.time",
    "I-arrive_time.time_relative",
    "I-city_name",
    "I-class_type",
    "I-cost_relative",
    "I-depart_date.day_number",
    "I-depart_date.today_relative",
    "I-depart_time.end_time",
    "I-depart_time.period_of_day",
    "I-depart_time.start_time",
    "I-depart_time.time",
    "I-depart_time.time_relative",
    "I-economy",
    "I-fare_amount",
    "I-fare_basis_code",
    "I-flight_mod",
    "I-flight_number",
    "I-flight_stop",
    "I-flight_time",
    "I-fromloc.airport_name",
    "I-fromloc.city_name",
    "I-fromloc.state_name",
    "I-meal_code",
    "I-meal_description",
    "I-restriction_code",
    "I-return_date.date_relative",
    "I-return_date.day_number",
    "I-return_time.period_of_day",
    "I-round_trip",
    "I-state_name",
    "I-stoploc.city_name",
    "I-time",
    "I-today_relative",
    "I-toloc.airport_name",
    "I-toloc.city_name",
    "I-toloc.state_name",
    "I-transport_type",
    "O",
    "B-aircraft_code",
};

constexpr std::string_view kManifest =
    "1\tcity_name_1\t17,48,71,78\n"
    "2\tcity_name_2\t91,109,119,123\n"
    "3\tstate_name_1\t50,68,81\n"
    "4\tstate_name_2\t110,118,124\n"
    "5\tairline_name_1\t2\n"
    "6\tairline_name_2\t83\n"
    "7\tairport_name_1\t4,47,70,77\n"
    "8\tairport_name_2\t84,108,122\n"
    "9\tclass_type\t18,37\n"
    "10\tairline_code\t1\n"
    "11\tairport_code\t3,46,69,76\n"
    "12\tmonth_name\t8,28,55,62\n"
    "13\tday_number\t7,23,27,61,85,94,115\n"
    "14\tday_name\t6,22,26,60\n"
    "15\tperiod_of_day\t12,33,57,65,87,97\n"
    "16\tam_pm\t86,88,89,96,98,99,120\n"
    "17\tO_set\t126\n"
    "18\tother\tremainder\n";

}  // namespace

const LabelInventory& atis_label_inventory() {
  static const LabelInventory inventory = [] {
    std::vector<std::string> labels(std::begin(kLabels), std::end(kLabels));
    return LabelInventory::from_labels(std::move(labels));
  }();
  return inventory;
}

std::string_view atis_feature_manifest() { return kManifest; }

}  // namespace slotfill
