pub mod conic;
pub mod fields;
pub mod gauss;
pub mod oracle;
pub mod quaternion;
pub mod valuation;
