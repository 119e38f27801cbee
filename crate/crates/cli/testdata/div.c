unsigned char nondet_uchar(void);

int main(void)
{
    unsigned char a = nondet_uchar();
    unsigned char b = nondet_uchar();
    return a / b;
}
