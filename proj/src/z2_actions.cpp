namespace fg {}
