int counter;

void bump(void) {
    counter = counter + 1;
}

int main() {
    counter = 0;
    bump();
    return counter;
}
