extern int sense(void);
int main() {
    int a;
    int b;
    a = sense();
    b = sense();
    return a * b;
}
