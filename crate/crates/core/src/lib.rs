pub mod cli;
pub mod constants;
pub mod form;
pub mod jet;
pub mod localization;
pub mod operator;
pub mod quadrature;
pub mod radial;
pub mod symbolic;
