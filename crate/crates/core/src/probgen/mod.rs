//! LP instances with a prescribed condition number, plus their file formats.

mod format;
mod instance;
mod mps;
mod spectrum;

pub use format::{decode_instance, encode_instance, read_instance, write_instance, MAGIC};
pub use instance::{
    assemble, assemble_with_factors, generate_instance, generate_instance_with_scale, InstanceMeta,
    LpInstance, BOX_BOUND, FORMAT_VERSION,
};
pub use mps::{export_mps, mps_string, parse_mps, read_mps};
pub use spectrum::{design_spectrum, SpectrumSpec, DEFAULT_SCALE};
