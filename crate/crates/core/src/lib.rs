pub mod value_groups;
pub mod exact_fields;
pub mod graded_core;
pub mod valued_series;
pub mod hensel_lambda;
pub mod crossed_products;
