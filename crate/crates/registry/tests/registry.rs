use alignest_registry::{Registry, RegistryError};

trait Greeter {
    fn greet(&self) -> String;
}

struct Hello;
impl Greeter for Hello {
    fn greet(&self) -> String {
        "hello".into()
    }
}

struct Repeat(usize);
impl Greeter for Repeat {
    fn greet(&self) -> String {
        "x".repeat(self.0)
    }
}

fn hello(_: &()) -> Result<Box<dyn Greeter>, String> {
    Ok(Box::new(Hello))
}

fn repeat(n: &usize) -> Result<Box<dyn Greeter>, String> {
    if *n == 0 {
        return Err("count must be positive".into());
    }
    Ok(Box::new(Repeat(*n)))
}

#[test]
fn resolves_registered_names() {
    let reg: Registry<dyn Greeter> = Registry::new("greeter").with("hello", hello);
    assert_eq!(reg.get("hello").unwrap().greet(), "hello");
    assert_eq!(reg.names(), vec!["hello"]);
    assert!(reg.contains("hello"));
}

#[test]
fn unknown_name_lists_alternatives() {
    let reg: Registry<dyn Greeter> = Registry::new("greeter").with("hello", hello);
    let err = reg.get("bye").err().unwrap();
    let msg = err.to_string();
    assert!(msg.contains("unknown greeter 'bye'"), "{msg}");
    assert!(msg.contains("hello"), "{msg}");
}

#[test]
fn duplicate_registration_is_rejected() {
    let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
    reg.register("hello", hello).unwrap();
    assert!(matches!(
        reg.register("hello", hello),
        Err(RegistryError::Duplicate { .. })
    ));
}

#[test]
fn parameterised_factories_validate_arguments() {
    let reg: Registry<dyn Greeter, usize> = Registry::new("greeter").with("repeat", repeat);
    assert_eq!(reg.create("repeat", &3).unwrap().greet(), "xxx");
    assert!(matches!(
        reg.create("repeat", &0),
        Err(RegistryError::Invalid { .. })
    ));
}
