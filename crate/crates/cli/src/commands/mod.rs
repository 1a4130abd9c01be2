pub mod cournot;
pub mod gsp;
pub mod routing;
pub mod selftest;
pub mod shapley;
pub mod utility;
