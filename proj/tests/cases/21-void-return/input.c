int counter = 0;
void tick(int n) {
    if (n <= 0) {
        return;
    }
    counter = counter + n;
}
int main() {
    tick(3);
    tick(-5);
    tick(4);
    return counter;
}
