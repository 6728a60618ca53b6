use pyo3::prelude::*;
use pyo3::types::PyModule;

#[test]
fn smoke_script_runs_against_the_bindings() {
    let script = concat!(env!("CARGO_MANIFEST_DIR"), "/python/smoke_test.py");
    Python::attach(|py| -> PyResult<()> {
        let m = PyModule::new(py, "wassdeg")?;
        wassdeg_py::wassdeg_py(&m)?;
        py.import("sys")?.getattr("modules")?.set_item("wassdeg", &m)?;
        py.import("runpy")?.call_method1("run_path", (script, py.None(), "__main__"))?;
        Ok(())
    })
    .unwrap_or_else(|e| panic!("{e}"));
}
